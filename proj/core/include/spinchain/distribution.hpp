#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spinchain/spin_config.hpp"

namespace spinchain {

// Dense real vector indexed by configuration index (bits value). Probability
// vectors sum to 1 and are nonnegative up to solver noise; signed vectors
// (expansion terms) carry no sign constraint.
struct Distribution {
    int length = 0;
    std::vector<double> values;  // size 2^length

    static Distribution zero(int length);
    static Distribution point_mass(int length, std::uint64_t index);

    double sum() const;
    double min_value() const;
    double abs_sum() const;
    bool is_probability(double sum_tol = 1e-12, double negative_tol = 1e-15) const;

    double& operator[](std::uint64_t idx) { return values[idx]; }
    double operator[](std::uint64_t idx) const { return values[idx]; }
    std::size_t size() const { return values.size(); }

    // "index,config,prob" rows sorted by index, after that column header.
    void write_csv(std::ostream& os) const;
};

// Total variation in the un-halved convention: sum_sigma |p - q|.
double tv_distance(const Distribution& p, const Distribution& q);

}  // namespace spinchain
