#pragma once

#include "mfig/core.hpp"

#include <functional>
#include <json.hpp>
#include <memory>

namespace mfig {

// Scalar potentials U for entropy-type energies E(p) = sum_i U(p_i).
// shannon extends continuously to the boundary with 0·log 0 = 0; gradients
// are only used on the interior.
enum class EntropyKind { shannon, quadratic, custom };

struct EntropyProfile {
    EntropyKind kind = EntropyKind::shannon;
    std::function<double(double)> u, du, ddu; // only set for custom

    double value(double x) const {
        switch (kind) {
            case EntropyKind::shannon: return x > 0.0 ? x * std::log(x) : 0.0;
            case EntropyKind::quadratic: return 0.5 * x * x;
            case EntropyKind::custom: return u(x);
        }
        return 0.0;
    }
    double deriv(double x) const {
        switch (kind) {
            case EntropyKind::shannon: return std::log(x) + 1.0;
            case EntropyKind::quadratic: return x;
            case EntropyKind::custom: return du(x);
        }
        return 0.0;
    }
    double deriv2(double x) const {
        switch (kind) {
            case EntropyKind::shannon: return 1.0 / x;
            case EntropyKind::quadratic: return 1.0;
            case EntropyKind::custom: return ddu(x);
        }
        return 0.0;
    }
};

// Energy functional on nonnegative vectors. The simplex constraint lives in
// the callers; E itself is defined on all of R_+^n so that homogeneity and
// product constructions stay meaningful.
//
// Kinds:
//   linear       E(p) = V·p                (gradient V, zero Hessian)
//   interaction  E(p) = ½ p^T W p          (W symmetric; gradient Wp, Hessian W)
//   entropy      E(p) = sum_i U(p_i)       (diagonal Hessian U''(p_i))
//   sum          E = sum of parts
class Energy {
  public:
    enum class Kind { linear, interaction, entropy, sum };

    static Energy linear(Vector v) {
        Energy e;
        e.kind_ = Kind::linear;
        e.v_ = std::move(v);
        return e;
    }

    static Energy interaction(Matrix w) {
        if (w.rows() != w.cols()) throw config_error("energy.W: matrix must be square");
        if ((w - w.transpose()).cwiseAbs().maxCoeff() > 0.0)
            throw config_error("energy.W: matrix must be symmetric");
        Energy e;
        e.kind_ = Kind::interaction;
        e.w_ = std::move(w);
        return e;
    }

    static Energy entropy(EntropyKind kind) {
        if (kind == EntropyKind::custom)
            throw config_error("energy.U: custom entropy needs explicit callables");
        Energy e;
        e.kind_ = Kind::entropy;
        e.profile_.kind = kind;
        return e;
    }

    static Energy entropy_custom(std::function<double(double)> u, std::function<double(double)> du,
                                 std::function<double(double)> ddu) {
        Energy e;
        e.kind_ = Kind::entropy;
        e.profile_ = EntropyProfile{EntropyKind::custom, std::move(u), std::move(du), std::move(ddu)};
        return e;
    }

    static Energy shannon() { return entropy(EntropyKind::shannon); }

    static Energy sum(std::vector<Energy> parts) {
        if (parts.empty()) throw config_error("energy.sum: needs at least one part");
        Energy e;
        e.kind_ = Kind::sum;
        e.parts_ = std::make_shared<std::vector<Energy>>(std::move(parts));
        return e;
    }

    Kind kind() const { return kind_; }
    EntropyKind entropy_kind() const { return profile_.kind; }
    const EntropyProfile& profile() const { return profile_; }

    // Size the energy is pinned to, or 0 when it applies to any dimension
    // (entropy, and sums of entropies).
    int fixed_size() const {
        switch (kind_) {
            case Kind::linear: return static_cast<int>(v_.size());
            case Kind::interaction: return static_cast<int>(w_.rows());
            case Kind::entropy: return 0;
            case Kind::sum: {
                int n = 0;
                for (const auto& part : *parts_) n = std::max(n, part.fixed_size());
                return n;
            }
        }
        return 0;
    }

    void check_size(int n, const char* who) const {
        int fixed = fixed_size();
        if (fixed != 0 && fixed != n)
            throw config_error(std::string(who) + ": energy is pinned to dimension " + std::to_string(fixed) +
                               ", got " + std::to_string(n));
    }

    double value(const Vector& p) const {
        switch (kind_) {
            case Kind::linear: return v_.dot(p);
            case Kind::interaction: return 0.5 * p.dot(w_ * p);
            case Kind::entropy: {
                double s = 0.0;
                for (Eigen::Index i = 0; i < p.size(); ++i) s += profile_.value(p[i]);
                return s;
            }
            case Kind::sum: {
                double s = 0.0;
                for (const auto& part : *parts_) s += part.value(p);
                return s;
            }
        }
        return 0.0;
    }

    Vector gradient(const Vector& p) const {
        switch (kind_) {
            case Kind::linear: return v_;
            case Kind::interaction: return w_ * p;
            case Kind::entropy: {
                Vector g(p.size());
                for (Eigen::Index i = 0; i < p.size(); ++i) g[i] = profile_.deriv(p[i]);
                return g;
            }
            case Kind::sum: {
                Vector g = Vector::Zero(p.size());
                for (const auto& part : *parts_) g += part.gradient(p);
                return g;
            }
        }
        return Vector();
    }

    Matrix second_partials(const Vector& p) const {
        const Eigen::Index n = p.size();
        switch (kind_) {
            case Kind::linear: return Matrix::Zero(n, n);
            case Kind::interaction: return w_;
            case Kind::entropy: {
                Matrix h = Matrix::Zero(n, n);
                for (Eigen::Index i = 0; i < n; ++i) h(i, i) = profile_.deriv2(p[i]);
                return h;
            }
            case Kind::sum: {
                Matrix h = Matrix::Zero(n, n);
                for (const auto& part : *parts_) h += part.second_partials(p);
                return h;
            }
        }
        return Matrix();
    }

    // ----- JSON configuration -----
    //
    //   {"kind":"linear","V":[...]}
    //   {"kind":"interaction","W":[[...],...]}
    //   {"kind":"entropy","U":"shannon"|"quadratic"}
    //   {"kind":"sum","parts":[...]}

    static Energy from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
            throw config_error("energy.kind: missing or not a string");
        const std::string kind = j["kind"].get<std::string>();
        if (kind == "linear") {
            if (!j.contains("V") || !j["V"].is_array()) throw config_error("energy.V: missing array");
            Vector v(static_cast<Eigen::Index>(j["V"].size()));
            for (std::size_t i = 0; i < j["V"].size(); ++i) {
                if (!j["V"][i].is_number()) throw config_error("energy.V: entries must be numbers");
                v[static_cast<Eigen::Index>(i)] = j["V"][i].get<double>();
            }
            return linear(std::move(v));
        }
        if (kind == "interaction") {
            if (!j.contains("W") || !j["W"].is_array() || j["W"].empty())
                throw config_error("energy.W: missing matrix");
            const std::size_t n = j["W"].size();
            Matrix w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t r = 0; r < n; ++r) {
                if (!j["W"][r].is_array() || j["W"][r].size() != n)
                    throw config_error("energy.W: matrix must be square");
                for (std::size_t c = 0; c < n; ++c) {
                    if (!j["W"][r][c].is_number()) throw config_error("energy.W: entries must be numbers");
                    w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j["W"][r][c].get<double>();
                }
            }
            return interaction(std::move(w));
        }
        if (kind == "entropy") {
            if (!j.contains("U") || !j["U"].is_string()) throw config_error("energy.U: missing name");
            const std::string u = j["U"].get<std::string>();
            if (u == "shannon") return entropy(EntropyKind::shannon);
            if (u == "quadratic") return entropy(EntropyKind::quadratic);
            throw config_error("energy.U: unknown entropy '" + u + "'");
        }
        if (kind == "sum") {
            if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
                throw config_error("energy.parts: missing array");
            std::vector<Energy> parts;
            for (const auto& part : j["parts"]) parts.push_back(from_json(part));
            return sum(std::move(parts));
        }
        throw config_error("energy.kind: unknown kind '" + kind + "'");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind_) {
            case Kind::linear: {
                j["kind"] = "linear";
                j["V"] = std::vector<double>(v_.data(), v_.data() + v_.size());
                break;
            }
            case Kind::interaction: {
                j["kind"] = "interaction";
                std::vector<std::vector<double>> rows;
                for (Eigen::Index r = 0; r < w_.rows(); ++r) {
                    std::vector<double> row;
                    for (Eigen::Index c = 0; c < w_.cols(); ++c) row.push_back(w_(r, c));
                    rows.push_back(std::move(row));
                }
                j["W"] = rows;
                break;
            }
            case Kind::entropy: {
                j["kind"] = "entropy";
                j["U"] = profile_.kind == EntropyKind::shannon     ? "shannon"
                         : profile_.kind == EntropyKind::quadratic ? "quadratic"
                                                                   : "custom";
                break;
            }
            case Kind::sum: {
                j["kind"] = "sum";
                j["parts"] = nlohmann::json::array();
                for (const auto& part : *parts_) j["parts"].push_back(part.to_json());
                break;
            }
        }
        return j;
    }

  private:
    Kind kind_ = Kind::entropy;
    Vector v_;
    Matrix w_;
    EntropyProfile profile_;
    std::shared_ptr<std::vector<Energy>> parts_;
};

// Restriction x -> E(x, 1-x) with derivatives; the transport-information
// mean and every two-point routine run through this profile.
// Owns its energy: profiles get stashed inside Mean closures that can
// outlive the expression the energy came from.
struct TwoPointProfile {
    Energy energy;

    double value(double x) const {
        Vector p(2);
        p << x, 1.0 - x;
        return energy.value(p);
    }
    double deriv(double x) const {
        Vector p(2);
        p << x, 1.0 - x;
        Vector g = energy.gradient(p);
        return g[0] - g[1];
    }
    double deriv2(double x) const {
        Vector p(2);
        p << x, 1.0 - x;
        Matrix h = energy.second_partials(p);
        return h(0, 0) - 2.0 * h(0, 1) + h(1, 1);
    }
};

} // namespace mfig
