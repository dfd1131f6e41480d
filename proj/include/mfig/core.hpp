#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfig {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when a user-supplied configuration value is malformed or out of
// contract (maps to CLI exit code 2). The message names the offending field.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical routine cannot certify its result (singular
// restriction, non-converged iteration). Maps to CLI exit code 1.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the quadrature when an improper integral fails to stabilize
// within the refinement budget.
struct divergence_error : numeric_error {
    using numeric_error::numeric_error;
};

// Thrown when an evaluation is requested too close to the simplex boundary
// for the formula to be meaningful.
struct boundary_error : numeric_error {
    using numeric_error::numeric_error;
};

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// std::uniform_real_distribution is implementation-defined, so sampling goes
// through an explicit 53-bit conversion to keep runs reproducible across
// toolchains for a fixed seed.
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64; small state, passes the usual batteries, and trivially portable
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Probability simplex helpers. Points live in the interior of
// M = { p : sum p_i = 1, p_i > 0 }; several routines take an explicit margin.
// ---------------------------------------------------------------------------

constexpr double simplex_sum_tol = 1e-12;

inline bool on_simplex(const Vector& p, double margin = 0.0) {
    if (p.size() == 0) return false;
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (!(p[i] >= margin)) return false;
        s += p[i];
    }
    return std::abs(s - 1.0) <= simplex_sum_tol * std::max(1.0, std::abs(s));
}

inline void require_interior(const Vector& p, double margin, const char* who) {
    if (!on_simplex(p, margin))
        throw config_error(std::string(who) + ": point is not in the simplex interior (margin " +
                           std::to_string(margin) + ")");
}

// Uniform sample from the simplex via exponential spacings, then pushed into
// the margin-interior so downstream code never touches the boundary.
inline Vector sample_simplex(Rng& rng, int n, double margin = 0.0) {
    Vector p(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        p[i] = -std::log(u);
        s += p[i];
    }
    p /= s;
    if (margin > 0.0) {
        double shrink = 1.0 - n * margin;
        if (shrink <= 0.0) throw config_error("sample_simplex: margin too large for dimension");
        p = (shrink * p).array() + margin;
    }
    return p;
}

// Euclidean projection onto the simplex (sorting algorithm). Used by the
// projected-gradient equilibrium solver.
inline Vector project_simplex(const Vector& y) {
    const int n = static_cast<int>(y.size());
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, tau = 0.0;
    int rho = 0;
    for (int i = 0; i < n; ++i) {
        css += u[i];
        double t = (css - 1.0) / (i + 1);
        if (u[i] - t > 0.0) {
            rho = i + 1;
            tau = t;
        }
    }
    (void)rho;
    Vector p(n);
    for (int i = 0; i < n; ++i) p[i] = std::max(y[i] - tau, 0.0);
    return p;
}

inline Vector uniform_distribution(int n) { return Vector::Constant(n, 1.0 / n); }

// Parse "a,b,c" into a vector; used by the CLI for --p0 style flags.
inline Vector parse_csv_vector(const std::string& text, const char* field) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
            if (used != tok.size()) throw std::invalid_argument(tok);
            vals.push_back(v);
        } catch (const std::exception&) {
            throw config_error(std::string(field) + ": expected comma-separated numbers, got '" + text + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    Vector out(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
    return out;
}

} // namespace mfig
