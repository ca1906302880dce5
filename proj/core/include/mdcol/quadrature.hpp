#pragma once

#include <vector>

namespace mdcol {

struct GaussRule {
    std::vector<double> x, w; // nodes and weights on [0, 1]
};

GaussRule gauss_rule(int n);

} // namespace mdcol
