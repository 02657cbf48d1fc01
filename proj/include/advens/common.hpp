#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace advens {

// Error taxonomy; the CLI maps these onto exit codes (config 2, data 3, experiment 4).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};
struct ShapeError : DataError {
    explicit ShapeError(const std::string& msg) : DataError(msg) {}
};
struct ExperimentError : std::runtime_error {
    explicit ExperimentError(const std::string& msg) : std::runtime_error(msg) {}
};
struct TrainingDivergence : ExperimentError {
    int epoch;
    explicit TrainingDivergence(int epoch_idx)
        : ExperimentError("non-finite training loss at epoch " + std::to_string(epoch_idx)),
          epoch(epoch_idx) {}
};

// splitmix64 finalizer; used to derive independent sub-seeds from (seed, stage) pairs
// so concurrent stages never share RNG streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }
inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return seed_mix(seed_mix(a, b), c);
}

// Deterministic RNG wrapper. All draws go through our own uniform/normal code so the
// stream does not depend on the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive bounds, rejection sampling to avoid modulo bias
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<std::int64_t>(eng_());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return lo + static_cast<std::int64_t>(v % range);
    }

    // Box-Muller with cached spare
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::string base64_encode(const unsigned char* data, std::size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

// median of the values (not required sorted); empty input throws ConfigError
double median(std::vector<double> values);

// RFC 4180: quoted fields, doubled quotes, embedded separators/newlines, optional CRLF
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::vector<std::vector<std::string>> load_csv_file(const std::string& path);
std::string csv_field(const std::string& value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// shortest representation that parses back to the same double
std::string double_to_string(double v);
// strict full-field parse; returns false on any trailing garbage or empty input
bool parse_double(const std::string& text, double* out);

}  // namespace advens
