#include "spinchain/spin_config.hpp"

#include <bit>
#include <cmath>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

int word_count(int length) { return (length + 63) / 64; }

std::uint64_t low_mask(int nbits) {
    return nbits >= 64 ? ~0ull : ((1ull << nbits) - 1ull);
}

}  // namespace

std::string to_string(Boundary b) {
    return b == Boundary::Empty ? "empty" : "plus";
}

Boundary boundary_from_string(std::string_view s) {
    if (s == "empty") return Boundary::Empty;
    if (s == "plus") return Boundary::Plus;
    throw argument_error("unknown boundary '" + std::string(s) + "' (expected empty|plus)");
}

SpinConfig::SpinConfig(int length) : length_(length), words_(word_count(length), 0) {
    if (length < 1) throw argument_error("chain length must be >= 1");
}

SpinConfig SpinConfig::all_minus(int length) { return SpinConfig(length); }

SpinConfig SpinConfig::all_plus(int length) {
    SpinConfig s(length);
    for (int w = 0; w < static_cast<int>(s.words_.size()); ++w) {
        int bits_here = std::min(64, length - 64 * w);
        s.words_[w] = low_mask(bits_here);
    }
    return s;
}

SpinConfig SpinConfig::from_index(int length, std::uint64_t index) {
    if (length > 63) throw argument_error("from_index requires L <= 63");
    if (length < 64 && index >> length)
        throw argument_error("configuration index out of range for this L");
    SpinConfig s(length);
    s.words_[0] = index;
    return s;
}

SpinConfig SpinConfig::from_string(std::string_view spins) {
    if (spins.empty()) throw argument_error("empty configuration string");
    SpinConfig s(static_cast<int>(spins.size()));
    for (int i = 0; i < static_cast<int>(spins.size()); ++i) {
        char c = spins[i];
        if (c == '+')
            s.words_[i / 64] |= 1ull << (i % 64);
        else if (c != '-')
            throw argument_error("configuration string must contain only '+'/'-'");
    }
    return s;
}

void SpinConfig::check_site(int site) const {
    if (site < 1 || site > length_)
        throw argument_error("site " + std::to_string(site) + " out of range [1," +
                             std::to_string(length_) + "]");
}

int SpinConfig::spin(int site) const { return is_plus(site) ? +1 : -1; }

bool SpinConfig::is_plus(int site) const {
    check_site(site);
    int b = site - 1;
    return (words_[b / 64] >> (b % 64)) & 1ull;
}

void SpinConfig::flip_in_place(int site) {
    check_site(site);
    int b = site - 1;
    words_[b / 64] ^= 1ull << (b % 64);
}

std::uint64_t SpinConfig::index() const {
    if (length_ > 63) throw argument_error("index() requires L <= 63");
    return words_[0];
}

int SpinConfig::minus_count() const {
    int plus = 0;
    for (auto w : words_) plus += std::popcount(w);
    return length_ - plus;
}

bool SpinConfig::all_plus() const { return minus_count() == 0; }
bool SpinConfig::all_minus() const { return minus_count() == length_; }

std::string SpinConfig::to_string() const {
    std::string s(length_, '-');
    for (int i = 0; i < length_; ++i)
        if ((words_[i / 64] >> (i % 64)) & 1ull) s[i] = '+';
    return s;
}

SpinConfig flip(const SpinConfig& sigma, int site) {
    SpinConfig t = sigma;
    t.flip_in_place(site);
    return t;
}

int left_antiparallel_count(const SpinConfig& sigma, Boundary b) {
    if (b == Boundary::Empty)
        throw contract_error(
            "left_antiparallel_count needs the plus boundary; "
            "use interior_pair_count for the empty one");
    // Walk pairs (0,1),(1,2),...,(L-1,L) with sigma_0 = +1.
    int count = 0;
    bool prev_plus = true;
    for (int site = 1; site <= sigma.length(); ++site) {
        bool cur = sigma.is_plus(site);
        if (cur != prev_plus) ++count;
        prev_plus = cur;
    }
    return count;
}

int interior_pair_count(const SpinConfig& sigma) {
    int count = 0;
    for (int site = 1; site < sigma.length(); ++site)
        if (sigma.is_plus(site) != sigma.is_plus(site + 1)) ++count;
    return count;
}

int minus_count(const SpinConfig& sigma) { return sigma.minus_count(); }

StateClass classify(const SpinConfig& sigma) {
    const int L = sigma.length();
    int first = 0, last = 0, minuses = 0;
    for (int i = 1; i <= L; ++i) {
        if (!sigma.is_plus(i)) {
            if (first == 0) first = i;
            last = i;
            ++minuses;
        }
    }
    if (minuses == 0) return {StateClass::Kind::AllPlus, 0, 0};
    if (last - first + 1 != minuses) return {StateClass::Kind::Other, 0, 0};
    if (last == L) return {StateClass::Kind::Ray, first, L + 1 - first};
    return {StateClass::Kind::Interval, first, minuses};
}

double ModelParams::epsilon() const { return std::exp(-4.0 * coupling); }

ModelParams ModelParams::chilled(int length, double c, Boundary b) {
    ModelParams p{length, c * std::log(static_cast<double>(length)), b};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (length < 1) throw argument_error("L must be >= 1");
    if (!(coupling >= 0.0)) throw argument_error("J must be >= 0");
}

}  // namespace spinchain
