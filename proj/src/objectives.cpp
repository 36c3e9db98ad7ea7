#include "dmss/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmss {

namespace {

constexpr std::array kAll{
    ObjectiveId::zakharov,           ObjectiveId::rosenbrock,         ObjectiveId::rotated_hyper_ellipsoid,
    ObjectiveId::styblinski_tang,    ObjectiveId::shifted_sinusoidal, ObjectiveId::centered_sinusoidal,
};

constexpr double kDeg = std::numbers::pi / 180.0;

// Stationary point of the one-dimensional Styblinski-Tang term near -2.9035.
double styblinski_tang_argmin() {
    double x = -2.9;
    for (int i = 0; i < 50; ++i) {
        const double g = 2.0 * x * x * x - 16.0 * x + 2.5;
        const double h = 6.0 * x * x - 16.0;
        x -= g / h;
    }
    return x;
}

double styblinski_tang_term(double x) { return 0.5 * (x * x * x * x - 16.0 * x * x + 5.0 * x); }

// Angle offset (degrees) of the sinusoidal family.
double sinusoid_offset(ObjectiveId id) { return id == ObjectiveId::shifted_sinusoidal ? 60.0 : 90.0; }

struct Dual {
    double v = 1.0;
    double d = 0.0;
};

Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }

// One product term  -amp * prod_l sin(freq * (x_l + offset) degrees).
// Accumulates its value, gradient or Hessian-vector product.
struct SineProduct {
    double amp;
    double freq;
    double offset;

    double value(std::span<const double> x) const {
        double p = 1.0;
        for (double xi : x) p *= std::sin(freq * kDeg * (xi + offset));
        return -amp * p;
    }

    void add_gradient(std::span<const double> x, std::span<double> out) const {
        const std::size_t n = x.size();
        std::vector<double> s(n), ds(n), prefix(n + 1, 1.0), suffix(n + 1, 1.0);
        const double w = freq * kDeg;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = std::sin(w * (x[i] + offset));
            ds[i] = w * std::cos(w * (x[i] + offset));
        }
        for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * s[i];
        for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * s[i];
        for (std::size_t i = 0; i < n; ++i) out[i] += -amp * ds[i] * prefix[i] * suffix[i + 1];
    }

    void add_hvp(std::span<const double> x, std::span<const double> v, std::span<double> out) const {
        const std::size_t n = x.size();
        const double w = freq * kDeg;
        std::vector<double> s(n), ds(n);
        std::vector<Dual> prefix(n + 1), suffix(n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = std::sin(w * (x[i] + offset));
            ds[i] = w * std::cos(w * (x[i] + offset));
        }
        // Dual factors s_l + t ds_l v_l carry the directional derivative.
        for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * Dual{s[i], ds[i] * v[i]};
        for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] * Dual{s[i], ds[i] * v[i]};
        for (std::size_t i = 0; i < n; ++i) {
            const Dual excl = prefix[i] * suffix[i + 1];
            const double d2 = -w * w * s[i];
            out[i] += -amp * (d2 * excl.v * v[i] + ds[i] * excl.d);
        }
    }
};

std::array<SineProduct, 2> sine_terms(ObjectiveId id) {
    const double off = sinusoid_offset(id);
    return {SineProduct{2.5, 1.0, off}, SineProduct{1.0, 5.0, off}};
}

}  // namespace

std::string_view objective_name(ObjectiveId id) {
    switch (id) {
        case ObjectiveId::zakharov: return "zakharov";
        case ObjectiveId::rosenbrock: return "rosenbrock";
        case ObjectiveId::rotated_hyper_ellipsoid: return "rhe";
        case ObjectiveId::styblinski_tang: return "styblinski_tang";
        case ObjectiveId::shifted_sinusoidal: return "shifted_sinusoidal";
        case ObjectiveId::centered_sinusoidal: return "centered_sinusoidal";
    }
    return "unknown";
}

ObjectiveId parse_objective(std::string_view name) {
    for (auto id : kAll) {
        if (objective_name(id) == name) return id;
    }
    throw std::invalid_argument("unknown objective id: " + std::string(name));
}

std::span<const ObjectiveId> all_objectives() { return kAll; }

ObjectiveSpec::ObjectiveSpec(ObjectiveId id, int dimension) : id_(id), dimension_(dimension) {
    if (dimension < 1) throw std::invalid_argument("objective dimension must be >= 1");
    const auto d = static_cast<std::size_t>(dimension);
    switch (id) {
        case ObjectiveId::zakharov:
            lo_ = -5.0, hi_ = 10.0;
            x_star_.assign(d, 0.0);
            break;
        case ObjectiveId::rosenbrock:
            lo_ = -2.048, hi_ = 2.048;
            x_star_.assign(d, 1.0);
            break;
        case ObjectiveId::rotated_hyper_ellipsoid:
            lo_ = -65.536, hi_ = 65.536;
            x_star_.assign(d, 0.0);
            break;
        case ObjectiveId::styblinski_tang:
            lo_ = -5.0, hi_ = 5.0;
            x_star_.assign(d, styblinski_tang_argmin());
            break;
        case ObjectiveId::shifted_sinusoidal:
            lo_ = -90.0, hi_ = 90.0;
            x_star_.assign(d, 30.0);
            break;
        case ObjectiveId::centered_sinusoidal:
            lo_ = -90.0, hi_ = 90.0;
            x_star_.assign(d, 0.0);
            break;
    }
    f_star_ = value(x_star_);
}

void ObjectiveSpec::check_dim(std::size_t n) const {
    if (n != static_cast<std::size_t>(dimension_)) {
        throw std::invalid_argument("dimension mismatch for objective " + std::string(name()) + ": expected " +
                                    std::to_string(dimension_) + ", got " + std::to_string(n));
    }
}

void ObjectiveSpec::clip(std::span<double> x) const {
    for (double& xi : x) xi = std::clamp(xi, lo_, hi_);
}

double ObjectiveSpec::value(std::span<const double> x) const {
    check_dim(x.size());
    const std::size_t n = x.size();
    switch (id_) {
        case ObjectiveId::zakharov: {
            double sq = 0.0, s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sq += x[i] * x[i];
                s += 0.5 * double(i + 1) * x[i];
            }
            const double s2 = s * s;
            return sq + s2 + s2 * s2;
        }
        case ObjectiveId::rosenbrock: {
            double f = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                const double b = x[i] - 1.0;
                f += 100.0 * a * a + b * b;
            }
            return f;
        }
        case ObjectiveId::rotated_hyper_ellipsoid: {
            double f = 0.0;
            for (std::size_t i = 0; i < n; ++i) f += double(n - i) * x[i] * x[i];
            return f;
        }
        case ObjectiveId::styblinski_tang: {
            double f = 0.0;
            for (double xi : x) f += styblinski_tang_term(xi);
            return f;
        }
        case ObjectiveId::shifted_sinusoidal:
        case ObjectiveId::centered_sinusoidal: {
            double f = 0.0;
            for (const auto& t : sine_terms(id_)) f += t.value(x);
            return f;
        }
    }
    return 0.0;
}

void ObjectiveSpec::gradient(std::span<const double> x, std::span<double> out) const {
    check_dim(x.size());
    check_dim(out.size());
    const std::size_t n = x.size();
    std::fill(out.begin(), out.end(), 0.0);
    switch (id_) {
        case ObjectiveId::zakharov: {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += 0.5 * double(i + 1) * x[i];
            const double ds = 2.0 * s + 4.0 * s * s * s;
            for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * x[i] + ds * 0.5 * double(i + 1);
            return;
        }
        case ObjectiveId::rosenbrock:
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double a = x[i + 1] - x[i] * x[i];
                out[i] += -400.0 * x[i] * a + 2.0 * (x[i] - 1.0);
                out[i + 1] += 200.0 * a;
            }
            return;
        case ObjectiveId::rotated_hyper_ellipsoid:
            for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * double(n - i) * x[i];
            return;
        case ObjectiveId::styblinski_tang:
            for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * x[i] * x[i] * x[i] - 16.0 * x[i] + 2.5;
            return;
        case ObjectiveId::shifted_sinusoidal:
        case ObjectiveId::centered_sinusoidal:
            for (const auto& t : sine_terms(id_)) t.add_gradient(x, out);
            return;
    }
}

void ObjectiveSpec::hessian_vector(std::span<const double> x, std::span<const double> v,
                                   std::span<double> out) const {
    check_dim(x.size());
    check_dim(v.size());
    check_dim(out.size());
    const std::size_t n = x.size();
    std::fill(out.begin(), out.end(), 0.0);
    switch (id_) {
        case ObjectiveId::zakharov: {
            // H = 2 I + (2 + 12 s^2) c c^T with c_i = i / 2.
            double s = 0.0, cv = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double c = 0.5 * double(i + 1);
                s += c * x[i];
                cv += c * v[i];
            }
            const double w = (2.0 + 12.0 * s * s) * cv;
            for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * v[i] + w * 0.5 * double(i + 1);
            return;
        }
        case ObjectiveId::rosenbrock:
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double hii = 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
                const double hij = -400.0 * x[i];
                out[i] += hii * v[i] + hij * v[i + 1];
                out[i + 1] += hij * v[i] + 200.0 * v[i + 1];
            }
            return;
        case ObjectiveId::rotated_hyper_ellipsoid:
            for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * double(n - i) * v[i];
            return;
        case ObjectiveId::styblinski_tang:
            for (std::size_t i = 0; i < n; ++i) out[i] = (6.0 * x[i] * x[i] - 16.0) * v[i];
            return;
        case ObjectiveId::shifted_sinusoidal:
        case ObjectiveId::centered_sinusoidal:
            for (const auto& t : sine_terms(id_)) t.add_hvp(x, v, out);
            return;
    }
}

double evaluate(const ObjectiveSpec& spec, std::span<const double> x, OracleCounter& counter) {
    const double f = spec.value(x);
    ++counter.f_evals;
    return f;
}

std::vector<double> gradient(const ObjectiveSpec& spec, std::span<const double> x, OracleCounter& counter) {
    std::vector<double> g(x.size());
    spec.gradient(x, g);
    ++counter.grad_evals;
    return g;
}

std::vector<double> hessian_vector_product(const ObjectiveSpec& spec, std::span<const double> x,
                                           std::span<const double> v, OracleCounter& counter) {
    std::vector<double> hv(x.size());
    spec.hessian_vector(x, v, hv);
    ++counter.hvp_evals;
    return hv;
}

std::vector<double> sample_uniform(const ObjectiveSpec& spec, Rng& rng) {
    std::vector<double> x(static_cast<std::size_t>(spec.dimension()));
    for (double& xi : x) xi = rng.uniform(spec.lower(), spec.upper());
    return x;
}

}  // namespace dmss
