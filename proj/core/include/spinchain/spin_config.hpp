#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spinchain {

enum class Boundary { Empty, Plus };

std::string to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

// One configuration of the chain, sites 1..L, spins in {-1,+1}.
// Bit (i-1) set <=> spin at site i is +1; bits above L-1 stay zero.
// The configuration index used by dense vectors is the bits value, so the
// all-plus state has index 2^L - 1 and all-minus has index 0.
class SpinConfig {
  public:
    explicit SpinConfig(int length);  // all minus
    static SpinConfig all_plus(int length);
    static SpinConfig all_minus(int length);
    static SpinConfig from_index(int length, std::uint64_t index);
    static SpinConfig from_string(std::string_view spins);  // e.g. "+--+"

    int length() const { return length_; }
    int spin(int site) const;       // +1 or -1, site in [1, L]
    bool is_plus(int site) const;
    void flip_in_place(int site);

    // Low-order 64 bits; this is the dense index whenever L <= 63.
    std::uint64_t bits() const { return words_[0]; }
    std::uint64_t index() const;    // requires L <= 63

    int minus_count() const;
    bool all_plus() const;
    bool all_minus() const;

    std::string to_string() const;  // site 1 first, '+'/'-'

    bool operator==(const SpinConfig& other) const = default;

  private:
    int length_;
    std::vector<std::uint64_t> words_;

    void check_site(int site) const;
};

// sigma^(i): flip the spin at site i, everything else unchanged.
SpinConfig flip(const SpinConfig& sigma, int site);

// Number of antiparallel pairs {i-1, i} for i in [1, L] with sigma_0 = +1.
// Only meaningful with the plus boundary; the empty boundary gives site 1
// no antiparallel status (use interior_pair_count instead).
int left_antiparallel_count(const SpinConfig& sigma, Boundary b);

// Number of antiparallel interior pairs {i, i+1}, i in [1, L-1]
// (the total length of the Peierls contours of the free chain).
int interior_pair_count(const SpinConfig& sigma);

int minus_count(const SpinConfig& sigma);

// The special states visible at first order: the all-plus state, a single
// interval of m minus spins starting at i (not touching site L), and the
// ray of minus spins from i through L.
struct StateClass {
    enum class Kind { AllPlus, Interval, Ray, Other };
    Kind kind = Kind::Other;
    int start = 0;  // i for Interval / Ray
    int span = 0;   // m for Interval; a Ray (i) is the interval (i; L+1-i)

    bool operator==(const StateClass&) const = default;
};

StateClass classify(const SpinConfig& sigma);

struct ModelParams {
    int length = 0;        // L >= 1
    double coupling = 0.0; // J >= 0
    Boundary boundary = Boundary::Empty;

    double epsilon() const;  // e^{-4J}

    // Chilled regime: J = c log L.
    static ModelParams chilled(int length, double c, Boundary b);

    void validate() const;  // argument_error on bad L or J
};

}  // namespace spinchain
