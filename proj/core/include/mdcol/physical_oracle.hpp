#pragma once

#include "mdcol/pullback.hpp"

namespace mdcol {

/// Independent route to physical derivatives: truncated Taylor inversion of
/// the geometry mapping followed by jet composition. Used to cross-check the
/// divergence-form operator rows; deliberately shares no code with them.
Jet2 physical_jet_by_inverse(const Jet2& v, const GeometryJets& g);

double laplacian_by_inverse(const Jet2& v, const GeometryJets& g);
double bilaplacian_by_inverse(const Jet2& v, const GeometryJets& g);

} // namespace mdcol
