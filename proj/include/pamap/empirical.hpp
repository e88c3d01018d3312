#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pamap {

// Uniformly weighted finite point set in R^dim (row-major storage).
struct EmpiricalMeasure {
    int dim = 1;
    std::vector<double> points;
    std::uint64_t map_hash = 0;
    int depth = 0;
    std::uint64_t seed = 0;

    std::size_t count() const { return dim > 0 ? points.size() / dim : 0; }
    double coord(std::size_t i, int j) const { return points[i * dim + j]; }
};

// text table: '#' metadata header lines, then one point per line with 17
// significant digits; parse() inverts exactly
std::string serialize_measure_table(const EmpiricalMeasure& m);
EmpiricalMeasure parse_measure_table(const std::string& text);

// Exact Prokhorov distance between equal-count uniform empirical measures:
// smallest eps in {pairwise distances} u {k/n} admitting a matching of size
// >= n(1-eps) among pairs at distance <= eps (maximum bipartite matching).
double prokhorov_distance(const EmpiricalMeasure& P, const EmpiricalMeasure& Q);

// Kolmogorov-Smirnov statistic of values against U[0,1]
double ks_uniform_statistic(std::vector<double> values);

// asymptotic two-sample KS p-value
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

}  // namespace pamap
