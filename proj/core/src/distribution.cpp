#include "spinchain/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

std::vector<double> alloc_state_vector(int length) {
    if (length < 1) throw argument_error("L must be >= 1");
    if (length > 30) throw resource_error("dense distributions are capped at L <= 30");
    return std::vector<double>(std::size_t{1} << length, 0.0);
}

}  // namespace

Distribution Distribution::zero(int length) { return {length, alloc_state_vector(length)}; }

Distribution Distribution::point_mass(int length, std::uint64_t index) {
    Distribution d{length, alloc_state_vector(length)};
    if (index >= d.values.size()) throw argument_error("index out of range");
    d.values[index] = 1.0;
    return d;
}

double Distribution::sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

double Distribution::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double Distribution::abs_sum() const {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
}

bool Distribution::is_probability(double sum_tol, double negative_tol) const {
    return std::abs(sum() - 1.0) <= sum_tol && min_value() >= -negative_tol;
}

void Distribution::write_csv(std::ostream& os) const {
    os << "index,config,prob\n";
    char buf[64];
    for (std::uint64_t idx = 0; idx < values.size(); ++idx) {
        std::snprintf(buf, sizeof buf, "%.17g", values[idx]);
        os << idx << "," << SpinConfig::from_index(length, idx).to_string() << "," << buf
           << "\n";
    }
}

double tv_distance(const Distribution& p, const Distribution& q) {
    if (p.length != q.length || p.values.size() != q.values.size())
        throw argument_error("tv_distance requires distributions of the same length");
    double s = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i) s += std::abs(p.values[i] - q.values[i]);
    return s;
}

}  // namespace spinchain
