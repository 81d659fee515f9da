#include "spinchain/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>

namespace spinchain {

std::string to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Irreversible: return "irreversible";
        case KernelKind::Glauber: return "glauber";
        case KernelKind::ZeroTemperature: return "zero-temperature";
        case KernelKind::DeltaP: return "delta-p";
    }
    return "?";
}

KernelKind kernel_from_string(std::string_view s) {
    if (s == "irreversible") return KernelKind::Irreversible;
    if (s == "glauber") return KernelKind::Glauber;
    if (s == "zero-temperature" || s == "zero") return KernelKind::ZeroTemperature;
    if (s == "delta-p" || s == "deltap") return KernelKind::DeltaP;
    throw argument_error("unknown kernel '" + std::string(s) +
                         "' (expected irreversible|glauber|zero-temperature|delta-p)");
}

KernelCoeffs KernelCoeffs::make(KernelKind kind, const ModelParams& params) {
    params.validate();
    if ((kind == KernelKind::ZeroTemperature || kind == KernelKind::DeltaP) &&
        params.boundary != Boundary::Plus)
        throw contract_error(to_string(kind) + " kernel is defined for the plus boundary only");
    const double e2 = std::exp(-2.0 * params.coupling);
    return KernelCoeffs{kind,    params.length, params.boundary,
                        1.0 / params.length, e2, e2 * e2};
}

double row_diagonal(const KernelCoeffs& c, std::uint64_t bits) {
    switch (c.kind) {
        case KernelKind::ZeroTemperature:
            return 1.0 - left_antiparallel_count_bits(bits, c.length) * c.inv_length;
        case KernelKind::DeltaP:
            return -1.0 + left_antiparallel_count_bits(bits, c.length) * c.inv_length;
        default: {
            double sum = 0.0;
            for (int site = 1; site <= c.length; ++site)
                sum += detail::flip_weight_bits(c, bits, site);
            return 1.0 - sum;
        }
    }
}

double hamiltonian(const ModelParams& params, const SpinConfig& sigma) {
    params.validate();
    double bonds = 0.0;
    for (int i = 2; i <= params.length; ++i)
        bonds += sigma.spin(i) * sigma.spin(i - 1);
    if (params.boundary == Boundary::Plus)
        bonds += sigma.spin(1) + sigma.spin(params.length);
    return -params.coupling * bonds;
}

double flip_acceptance(KernelKind kind, const ModelParams& params,
                       const SpinConfig& sigma, int site) {
    if (site < 1 || site > params.length)
        throw argument_error("site out of range");
    const KernelCoeffs c = KernelCoeffs::make(kind, params);
    const int L = params.length;
    const Boundary bc = params.boundary;
    auto spin_at = [&](int j) -> int {
        if (j == 0 || j == L + 1) return bc == Boundary::Plus ? +1 : 0;
        return sigma.spin(j);
    };
    const int s = spin_at(site);
    switch (kind) {
        case KernelKind::Irreversible: {
            const int prod = s * spin_at(site - 1);
            if (prod == 0) return c.e2;
            return prod > 0 ? c.e4 : 1.0;
        }
        case KernelKind::Glauber: {
            const int t = s * (spin_at(site - 1) + spin_at(site + 1));
            if (t <= 0) return 1.0;
            return t == 1 ? c.e2 : c.e4;
        }
        case KernelKind::ZeroTemperature:
            return s * spin_at(site - 1) < 0 ? 1.0 : 0.0;
        case KernelKind::DeltaP:
            return s * spin_at(site - 1) > 0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double KernelRow::off_diagonal_sum() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.weight;
    return sum;
}

KernelRow kernel_row(KernelKind kind, const ModelParams& params, const SpinConfig& sigma) {
    if (sigma.length() != params.length)
        throw argument_error("params.length does not match the configuration length");
    const KernelCoeffs c = KernelCoeffs::make(kind, params);
    KernelRow row{sigma, 0.0, {}};
    row.entries.reserve(params.length);
    if (params.length <= 63) {
        for_each_transition(c, sigma.bits(), [&](int site, std::uint64_t, double w) {
            row.entries.push_back({site, w});
        });
    } else {
        for (int site = 1; site <= params.length; ++site) {
            double w = flip_acceptance(kind, params, sigma, site) * c.inv_length;
            if (w != 0.0) row.entries.push_back({site, w});
        }
    }
    if (kind == KernelKind::ZeroTemperature || kind == KernelKind::DeltaP) {
        int walls = left_antiparallel_count(sigma, Boundary::Plus);
        row.diagonal = (kind == KernelKind::ZeroTemperature)
                           ? 1.0 - static_cast<double>(walls) / params.length
                           : -1.0 + static_cast<double>(walls) / params.length;
    } else {
        row.diagonal = 1.0 - row.off_diagonal_sum();
    }
    return row;
}

SparseKernel assemble(KernelKind kind, const ModelParams& params) {
    params.validate();
    if (params.length > 30)
        throw resource_error("assemble is capped at L <= 30 (2^L rows)");
    if (params.length > 22)
        std::cerr << "spinchain: assembling 2^" << params.length
                  << " kernel rows, this will be slow and large\n";
    KernelCoeffs::make(kind, params);  // boundary contract check
    const std::uint64_t n = 1ull << params.length;
    SparseKernel m{kind, params, {}};
    m.rows.reserve(n);
    for (std::uint64_t idx = 0; idx < n; ++idx)
        m.rows.push_back(kernel_row(kind, params, SpinConfig::from_index(params.length, idx)));
    return m;
}

void SparseKernel::dump(std::ostream& os) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", params.coupling);
    os << "# L=" << params.length << " J=" << buf << " bc=" << to_string(params.boundary)
       << " kind=" << to_string(kind) << "\n";
    for (const auto& row : rows) {
        const std::uint64_t src = row.source.index();
        if (row.diagonal != 0.0) {
            std::snprintf(buf, sizeof buf, "%.17g", row.diagonal);
            os << src << " " << src << " " << buf << "\n";
        }
        for (const auto& e : row.entries) {
            std::snprintf(buf, sizeof buf, "%.17g", e.weight);
            os << src << " " << (src ^ (1ull << (e.site - 1))) << " " << buf << "\n";
        }
    }
}

}  // namespace spinchain
