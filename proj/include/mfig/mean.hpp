#pragma once

#include "mfig/energy.hpp"

#include <functional>
#include <optional>

namespace mfig {

enum class MeanKind { arithmetic, geometric, logarithmic, spectral_graph, transport_information, custom };

enum class DerivativeMode { analytic, finite_difference };

// Symmetric positive mean theta(s,t) on (0,inf)^2 together with its partial
// derivative in the first slot. The built-ins are 1-homogeneous; the
// logarithmic / spectral / transport-information kinds have removable
// diagonal singularities that are evaluated by series once |s-t| is small
// enough for the direct formula to lose digits.
class Mean {
  public:
    static Mean arithmetic() { return Mean(MeanKind::arithmetic); }
    static Mean geometric() { return Mean(MeanKind::geometric); }
    static Mean logarithmic() { return Mean(MeanKind::logarithmic); }
    static Mean spectral_graph() { return Mean(MeanKind::spectral_graph); }

    // theta(s,t) = 2C (s+t) [e(x) - e(1/2)] / e'(x)^2 with x = s/(s+t) and
    // e the two-point restriction of the energy. Requires e symmetric about
    // 1/2 with e''(1/2) > 0. C <= 0 or a non-symmetric energy is a
    // configuration error. When C is omitted it defaults to 8[e(0) - e(1/2)],
    // which normalizes the (0,1)-distance to 1.
    static Mean transport_information(const Energy& energy, std::optional<double> C = std::nullopt) {
        energy.check_size(2, "mean.tim");
        Mean m(MeanKind::transport_information);
        TwoPointProfile prof{energy};
        m.e_ = [prof](double x) { return prof.value(x); };
        m.e1_ = [prof](double x) { return prof.deriv(x); };
        m.e2_ = [prof](double x) { return prof.deriv2(x); };
        m.e_half_ = m.e_(0.5);
        for (double x : {0.1, 0.23, 0.4})
            if (std::abs(m.e_(x) - m.e_(1.0 - x)) > 1e-9 * std::max(1.0, std::abs(m.e_(x))))
                throw config_error("mean.tim: energy restriction must be symmetric about 1/2");
        m.a_ = m.e2_(0.5);
        if (!(m.a_ > 0.0)) throw config_error("mean.tim: second derivative at 1/2 must be positive");
        {
            const double h = 1e-3;
            m.b_ = (m.e2_(0.5 + h) - 2.0 * m.a_ + m.e2_(0.5 - h)) / (h * h);
        }
        {
            // e2'''' at 1/2, for the u^4 series term; 5-point stencil
            const double h = 1e-2;
            m.d_ = (m.e2_(0.5 + 2 * h) - 4.0 * m.e2_(0.5 + h) + 6.0 * m.a_ - 4.0 * m.e2_(0.5 - h) +
                    m.e2_(0.5 - 2 * h)) /
                   (h * h * h * h);
        }
        if (C) {
            if (!(*C > 0.0)) throw config_error("mean.tim: C must be > 0");
            m.tim_c_ = *C;
        } else {
            double delta = m.e_(1.0) - m.e_half_;
            if (!(delta > 0.0)) throw config_error("mean.tim: default C needs E(0,1) > E(1/2,1/2)");
            m.tim_c_ = 8.0 * delta;
        }
        return m;
    }

    static Mean custom(std::function<double(double, double)> value,
                       std::function<double(double, double)> partial = nullptr) {
        if (!value) throw config_error("mean.custom: value callable required");
        Mean m(MeanKind::custom);
        m.custom_value_ = std::move(value);
        m.custom_partial_ = std::move(partial);
        if (!m.custom_partial_) m.mode_ = DerivativeMode::finite_difference;
        return m;
    }

    MeanKind kind() const { return kind_; }
    double tim_constant() const { return tim_c_; }

    DerivativeMode derivative_mode() const { return mode_; }
    Mean with_derivative_mode(DerivativeMode mode) const {
        if (mode == DerivativeMode::analytic && kind_ == MeanKind::custom && !custom_partial_)
            throw config_error("mean: custom mean without partial cannot be analytic");
        Mean m = *this;
        m.mode_ = mode;
        return m;
    }

    double theta(double s, double t) const {
        switch (kind_) {
            case MeanKind::arithmetic: return 0.5 * (s + t);
            case MeanKind::geometric: return std::sqrt(s * t);
            case MeanKind::logarithmic: return log_mean(s, t);
            case MeanKind::spectral_graph: {
                double a = log_mean(s, t);
                double b = std::sqrt(s) + std::sqrt(t);
                return (a / b) * (a / b);
            }
            case MeanKind::transport_information: return tim_theta(s, t);
            case MeanKind::custom: return custom_value_(s, t);
        }
        return 0.0;
    }

    double operator()(double s, double t) const { return theta(s, t); }

    // d theta / d s. The second-slot partial follows from symmetry:
    // d theta / d t (s,t) = partial_s(t,s).
    double partial_s(double s, double t) const {
        if (mode_ == DerivativeMode::finite_difference) return fd_partial(s, t);
        switch (kind_) {
            case MeanKind::arithmetic: return 0.5;
            case MeanKind::geometric: return 0.5 * std::sqrt(t / s);
            case MeanKind::logarithmic: return log_mean_partial(s, t);
            case MeanKind::spectral_graph: {
                double a = log_mean(s, t);
                double as = log_mean_partial(s, t);
                double b = std::sqrt(s) + std::sqrt(t);
                return 2.0 * a * as / (b * b) - a * a / (b * b * b * std::sqrt(s));
            }
            case MeanKind::transport_information: return tim_partial(s, t);
            case MeanKind::custom: return custom_partial_(s, t);
        }
        return 0.0;
    }

    double partial_t(double s, double t) const { return partial_s(t, s); }

  private:
    explicit Mean(MeanKind kind) : kind_(kind) {}

    double fd_partial(double s, double t) const {
        double h = 1e-6 * std::max(1.0, s);
        if (h > 0.5 * s) h = 0.5 * s; // keep the stencil inside the domain
        return (theta(s + h, t) - theta(s - h, t)) / (2.0 * h);
    }

    // (s - t) / (log s - log t), evaluated as h/artanh(h/m) so the diagonal
    // neighbourhood can switch to a series in z = (s-t)/(s+t) without
    // cancellation.
    static double log_mean(double s, double t) {
        if (s == t) return s;
        double m = 0.5 * (s + t);
        double z = (s - t) / (s + t);
        if (std::abs(z) <= 1e-4) {
            double z2 = z * z;
            return m * (1.0 - z2 / 3.0 - 4.0 * z2 * z2 / 45.0);
        }
        return (s - t) / (2.0 * std::atanh(z));
    }

    static double log_mean_partial(double s, double t) {
        double z = (s - t) / (s + t);
        if (std::abs(z) <= 1e-4) {
            double z2 = z * z;
            double ts = t / (s + t);
            return 0.5 - z2 / 6.0 - (2.0 * z / 3.0) * ts - (16.0 * z * z2 / 45.0) * ts;
        }
        double d = 2.0 * std::atanh(z);
        return (d - (s - t) / s) / (d * d);
    }

    // Series window: inside |u| <= 2e-3 the direct quotients for the partial
    // cancel to O(u^4) in the numerator (the value to O(u^2)), so both switch
    // to the expansion
    //   theta = C(s+t)/a [1 - (b/4a) u^2 + c4 u^4] + O(u^6),
    //   c4 = b^2/(18 a^2) - d/(72 a),
    // with a = e''(1/2), b = e''''(1/2), d = e''''''(1/2). At the switch the
    // direct side is good to ~3e-8 relative and the series side to ~1e-13.
    static constexpr double tim_series_window = 2e-3;

    double tim_c4() const { return b_ * b_ / (18.0 * a_ * a_) - d_ / (72.0 * a_); }

    double tim_theta(double s, double t) const {
        double u = 0.5 * (s - t) / (s + t);
        if (std::abs(u) <= tim_series_window) {
            double u2 = u * u;
            return tim_c_ * (s + t) / a_ * (1.0 - (b_ / (4.0 * a_)) * u2 + tim_c4() * u2 * u2);
        }
        double x = s / (s + t);
        double e1 = e1_(x);
        return 2.0 * tim_c_ * (s + t) * (e_(x) - e_half_) / (e1 * e1);
    }

    double tim_partial(double s, double t) const {
        double u = 0.5 * (s - t) / (s + t);
        if (std::abs(u) <= tim_series_window) {
            double u2 = u * u;
            double c4 = tim_c4();
            double value_part = 1.0 - (b_ / (4.0 * a_)) * u2 + c4 * u2 * u2;
            double slope_part = ((b_ / (2.0 * a_)) * u - 4.0 * c4 * u * u2) * t / (s + t);
            return tim_c_ / a_ * (value_part - slope_part);
        }
        double x = s / (s + t);
        double e0 = e_(x) - e_half_;
        double e1 = e1_(x);
        double e2 = e2_(x);
        double g = e0 / (e1 * e1);
        double gp = (e1 * e1 - 2.0 * e0 * e2) / (e1 * e1 * e1);
        return 2.0 * tim_c_ * g + 2.0 * tim_c_ * gp * t / (s + t);
    }

    MeanKind kind_;
    DerivativeMode mode_ = DerivativeMode::analytic;
    double tim_c_ = 0.0;
    std::function<double(double)> e_, e1_, e2_;
    double e_half_ = 0.0, a_ = 0.0, b_ = 0.0, d_ = 0.0;
    std::function<double(double, double)> custom_value_, custom_partial_;
};

// CLI names: arithmetic | geometric | logarithmic | spectral | tim | tim:C=<float>.
// The transport-information kinds need the energy that shapes them.
inline Mean mean_from_string(const std::string& spec, const Energy* energy = nullptr) {
    if (spec == "arithmetic") return Mean::arithmetic();
    if (spec == "geometric") return Mean::geometric();
    if (spec == "logarithmic") return Mean::logarithmic();
    if (spec == "spectral") return Mean::spectral_graph();
    if (spec == "tim" || spec.rfind("tim:", 0) == 0) {
        if (!energy) throw config_error("mean: transport-information mean requires --energy");
        std::optional<double> c;
        if (spec.rfind("tim:", 0) == 0) {
            const std::string rest = spec.substr(4);
            if (rest.rfind("C=", 0) != 0) throw config_error("mean: expected tim:C=<float>, got '" + spec + "'");
            try {
                std::size_t used = 0;
                c = std::stod(rest.substr(2), &used);
                if (used != rest.size() - 2) throw std::invalid_argument(rest);
            } catch (const std::exception&) {
                throw config_error("mean: bad constant in '" + spec + "'");
            }
        }
        return Mean::transport_information(*energy, c);
    }
    throw config_error("mean: unknown mean '" + spec +
                       "' (want arithmetic|geometric|logarithmic|spectral|tim:C=<float>)");
}

// Two properties of 1-homogeneous concave means, checked on random
// quadruples: the Euler identity s d1 + t d2 = theta at (s,t), and the
// tangent-plane inequality s d1(u,v) + t d2(u,v) >= theta(s,t).
struct ErbarMaasReport {
    double max_euler_residual = 0.0; // |s d1 + t d2 - theta| / theta, worst case
    double min_tangent_gap = 0.0;    // min of s d1(u,v) + t d2(u,v) - theta(s,t)
    int samples = 0;
};

inline ErbarMaasReport check_erbar_maas(const Mean& mean, int samples, std::uint64_t seed) {
    Rng rng(seed);
    ErbarMaasReport rep;
    rep.samples = samples;
    rep.min_tangent_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        double s = rng.uniform(1e-6, 1.0);
        double t = rng.uniform(1e-6, 1.0);
        double u = rng.uniform(1e-6, 1.0);
        double v = rng.uniform(1e-6, 1.0);
        double th = mean.theta(s, t);
        double euler = std::abs(s * mean.partial_s(s, t) + t * mean.partial_t(s, t) - th) /
                       std::max(1e-300, std::abs(th));
        rep.max_euler_residual = std::max(rep.max_euler_residual, euler);
        double tangent = s * mean.partial_s(u, v) + t * mean.partial_t(u, v) - th;
        rep.min_tangent_gap = std::min(rep.min_tangent_gap, tangent);
    }
    return rep;
}

} // namespace mfig
