// Copyright 2026 The pvlab Authors
// SPDX-License-Identifier: Apache-2.0
#include "pvlab/shotnoise.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "pvlab/error.hpp"
#include "pvlab/poisson.hpp"
#include "pvlab/spatial_grid.hpp"

namespace pvlab
{
namespace
{
void require_positive(double v, char const* what)
{
    require(std::isfinite(v) && v > 0, std::string(what) + " must be positive");
}

void require_dim(std::size_t d)
{
    require(d >= 1, "kernel dimension must be >= 1",
            ErrorCode::dimension_mismatch);
}

void check_tail(PowerLawTail const& t)
{
    require_positive(t.c_lower, "c_lower");
    require_positive(t.c_upper, "c_upper");
    require_positive(t.delta, "delta");
    require_positive(t.gamma, "gamma");
    require_positive(t.c_g, "c_g");
}

double radical_inverse(std::size_t index, std::size_t base)
{
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double out = 0;
    while (index > 0)
    {
        out += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return out;
}

constexpr std::array<std::size_t, 12> primes{2, 3, 5, 7, 11, 13,
                                             17, 19, 23, 29, 31, 37};

std::string describe_kernel(Kernel const& k)
{
    std::ostringstream os;
    switch (k.kind())
    {
    case Kernel::Kind::power_law:
        os << "powerlaw(delta=" << k.tail()->delta << ",gamma="
           << k.tail()->gamma << ")";
        break;
    case Kernel::Kind::compact_support:
        os << "indicator(a=" << k.amplitude() << ",R=" << *k.support_radius()
           << ")";
        break;
    case Kernel::Kind::custom:
        os << "custom";
        break;
    }
    return os.str();
}
}  // namespace

Kernel Kernel::power_law(std::size_t dim, PowerLawTail tail)
{
    require_dim(dim);
    check_tail(tail);
    Kernel k;
    k.kind_ = Kind::power_law;
    k.dim_ = dim;
    k.amplitude_ = tail.c_upper * std::pow(tail.c_g, -tail.delta);
    k.tail_ = tail;
    return k;
}

Kernel Kernel::compact_indicator(std::size_t dim, double amplitude,
                                 double support_radius)
{
    require_dim(dim);
    require(std::isfinite(amplitude) && amplitude != 0,
            "kernel amplitude must be finite and non-zero");
    require_positive(support_radius, "support radius");
    Kernel k;
    k.kind_ = Kind::compact_support;
    k.dim_ = dim;
    k.amplitude_ = amplitude;
    k.support_ = support_radius;
    return k;
}

Kernel Kernel::custom(std::size_t dim, Callable g,
                      std::optional<double> support_radius,
                      std::optional<PowerLawTail> tail)
{
    require_dim(dim);
    require(static_cast<bool>(g), "custom kernel needs a callable");
    require(support_radius.has_value() || tail.has_value(),
            "custom kernel must declare a support radius or tail exponents");
    if (support_radius)
    {
        require_positive(*support_radius, "support radius");
    }
    if (tail)
    {
        check_tail(*tail);
    }
    Kernel k;
    k.kind_ = Kind::custom;
    k.dim_ = dim;
    k.support_ = support_radius;
    k.tail_ = tail;
    k.custom_ = std::move(g);
    std::vector<double> const zero(dim, 0.0);
    k.amplitude_ = k.custom_(zero);
    return k;
}

Kernel Kernel::from_json(nlohmann::json const& j)
{
    if (!j.is_object())
    {
        fail(ErrorCode::config, "kernel must be a JSON object");
    }
    auto num = [&](char const* key, double fallback) {
        if (!j.contains(key))
        {
            return fallback;
        }
        if (!j.at(key).is_number())
        {
            fail(ErrorCode::config,
                 std::string("kernel field '") + key + "' must be a number");
        }
        return j.at(key).get<double>();
    };
    if (!j.contains("kind") || !j.at("kind").is_string())
    {
        fail(ErrorCode::config, "kernel needs a string field 'kind'");
    }
    auto const kind = j.at("kind").get<std::string>();
    double const d = num("d", 2);
    if (!(d >= 1) || d != std::floor(d))
    {
        fail(ErrorCode::config, "kernel field 'd' must be a positive integer");
    }
    auto const dim = static_cast<std::size_t>(d);
    if (kind == "power_law")
    {
        if (!j.contains("delta"))
        {
            fail(ErrorCode::config, "power_law kernel needs 'delta'");
        }
        PowerLawTail t;
        t.delta = num("delta", 0);
        t.gamma = num("gamma", t.delta);
        t.c_lower = num("c_lower", 1);
        t.c_upper = num("c_upper", 1);
        t.c_g = num("c_g", 1);
        return power_law(dim, t);
    }
    if (kind == "compact")
    {
        return compact_indicator(dim, num("amplitude", 1), num("radius", 1));
    }
    fail(ErrorCode::config,
         "unknown kernel kind '" + kind + "' (expected power_law or compact)");
}

nlohmann::json Kernel::to_json() const
{
    switch (kind_)
    {
    case Kind::power_law:
        return {{"kind", "power_law"}, {"d", dim_},
                {"delta", tail_->delta}, {"gamma", tail_->gamma},
                {"c_lower", tail_->c_lower}, {"c_upper", tail_->c_upper},
                {"c_g", tail_->c_g}};
    case Kind::compact_support:
        return {{"kind", "compact"}, {"d", dim_}, {"amplitude", amplitude_},
                {"radius", *support_}};
    case Kind::custom:
        break;
    }
    fail(ErrorCode::invalid_argument, "custom kernels have no JSON form");
}

double Kernel::radial(double r) const
{
    switch (kind_)
    {
    case Kind::power_law:
        return tail_->c_upper * std::pow(std::max(r, tail_->c_g), -tail_->delta);
    case Kind::compact_support:
        return r <= *support_ ? amplitude_ : 0.0;
    case Kind::custom:
        break;
    }
    fail(ErrorCode::invalid_argument, "custom kernels are not radial");
}

double Kernel::operator()(std::span<double const> x) const
{
    if (x.size() != dim_)
    {
        fail(ErrorCode::dimension_mismatch, "kernel argument has wrong dimension");
    }
    if (kind_ == Kind::custom)
    {
        if (support_ && norm(x) > *support_)
        {
            return 0;
        }
        return custom_(x);
    }
    return radial(norm(x));
}

AdmissibilityReport validate_kernel(Kernel const& kernel)
{
    AdmissibilityReport rep;
    std::size_t const d = kernel.dim();
    std::vector<double> x(d, 0.0);
    if (!(kernel(x) > 0))
    {
        rep.reasons.emplace_back("g(0) must be positive");
    }

    if (kernel.tail())
    {
        PowerLawTail const& t = *kernel.tail();
        double const dd = static_cast<double>(d);
        if (!(t.delta > 3 * dd))
        {
            rep.reasons.emplace_back("requires delta > 3d");
        }
        if (!(t.gamma >= t.delta))
        {
            rep.reasons.emplace_back("requires gamma >= delta");
        }
        if (!(t.delta + dd / 2 > t.gamma))
        {
            rep.reasons.emplace_back("requires delta + d/2 > gamma");
        }
        std::vector<std::vector<double>> dirs;
        for (std::size_t a = 0; a < d; ++a)
        {
            std::vector<double> e(d, 0.0);
            e[a] = 1;
            dirs.push_back(e);
            e[a] = -1;
            dirs.push_back(e);
        }
        dirs.emplace_back(d, 1 / std::sqrt(dd));
        bool bounds_ok = true;
        for (int step = 0; step <= 60 && bounds_ok; ++step)
        {
            double const r = t.c_g * std::pow(10.0, step / 20.0);
            double const lower = t.c_lower * std::pow(r, -t.gamma);
            double const upper = t.c_upper * std::pow(r, -t.delta);
            for (auto const& dir : dirs)
            {
                for (std::size_t a = 0; a < d; ++a)
                {
                    x[a] = r * dir[a];
                }
                double const g = std::abs(kernel(x));
                if (g < lower * (1 - 1e-12) || g > upper * (1 + 1e-12))
                {
                    bounds_ok = false;
                    std::ostringstream os;
                    os << "|g| violates the power bounds at radius " << r;
                    rep.reasons.push_back(os.str());
                    break;
                }
            }
        }
        rep.regime = AdmissibilityReport::Regime::power_law_tail;
    }
    else if (kernel.support_radius())
    {
        rep.regime = AdmissibilityReport::Regime::compact_support;
    }
    rep.admissible = rep.reasons.empty();
    if (!rep.admissible)
    {
        rep.regime = AdmissibilityReport::Regime::rejected;
    }
    return rep;
}

double field_value(Kernel const& kernel, PointConfiguration const& config,
                   std::span<double const> x)
{
    if (config.dim() != kernel.dim() || x.size() != kernel.dim())
    {
        fail(ErrorCode::dimension_mismatch,
             "field evaluation with mismatched dimensions");
    }
    std::vector<double> diff(x.size());
    double sum = 0;
    for (std::size_t i = 0; i < config.size(); ++i)
    {
        auto const y = config.point(i);
        for (std::size_t a = 0; a < x.size(); ++a)
        {
            diff[a] = x[a] - y[a];
        }
        sum += kernel(diff);
    }
    return sum;
}

double truncation_radius(Kernel const& kernel, double c3, double epsilon,
                         double target)
{
    require(kernel.tail().has_value(),
            "truncation radius needs a kernel with declared tail exponents");
    PowerLawTail const& t = *kernel.tail();
    auto const d = static_cast<double>(kernel.dim());
    require(t.delta > d, "truncation radius needs delta > d");
    AdmissibilityReport const rep = validate_kernel(kernel);
    if (!rep.admissible)
    {
        fail(ErrorCode::invalid_argument,
             "kernel is not admissible: " + rep.reasons.front());
    }
    require_positive(c3, "c3");
    require_positive(target, "target exceedance probability");
    require(std::isfinite(epsilon) && epsilon >= 0, "epsilon must be >= 0");
    double const kappa = ball_volume(kernel.dim(), 1.0);
    double const base = t.c_upper * d * kappa / (c3 * (t.delta - d) * target);
    double const r = epsilon + std::pow(base, 1 / (t.delta - d));
    return std::max(r, t.c_g + epsilon);
}

void ExcursionSpec::validate() const
{
    require(std::isfinite(level) && level > 0, "excursion level must be positive");
    require(std::isfinite(radius) && radius >= 1,
            "observation radius must be >= 1");
    require(nodes >= 1, "excursion quadrature needs at least one node");
    require(std::isfinite(margin) && margin >= 0,
            "sampling margin must be >= 0");
}

double sampling_margin(Kernel const& kernel, double level,
                       TruncationOptions const& options)
{
    if (kernel.support_radius())
    {
        return *kernel.support_radius();
    }
    require_positive(level, "excursion level");
    return truncation_radius(kernel, options.c3_fraction * level,
                             options.epsilon, options.tolerance);
}

std::vector<double> ball_quadrature_nodes(std::size_t dim, double radius,
                                          std::size_t count)
{
    require(dim >= 1 && dim <= primes.size(),
            "quadrature nodes support dimension 1 to 12",
            ErrorCode::dimension_mismatch);
    require_positive(radius, "quadrature radius");
    require(count >= 1, "quadrature needs at least one node");
    std::vector<double> out;
    out.reserve(count * dim);
    std::vector<double> p(dim);
    for (std::size_t index = 1; out.size() < count * dim; ++index)
    {
        double r2 = 0;
        for (std::size_t a = 0; a < dim; ++a)
        {
            p[a] = 2 * radical_inverse(index, primes[a]) - 1;
            r2 += p[a] * p[a];
        }
        if (r2 <= 1)
        {
            for (double v : p)
            {
                out.push_back(radius * v);
            }
        }
    }
    return out;
}

ExcursionVolume::ExcursionVolume(Kernel kernel, ExcursionSpec spec)
    : kernel_(std::move(kernel)),
      spec_((spec.validate(), spec)),
      nodes_(ball_quadrature_nodes(kernel_.dim(), spec.radius, spec.nodes)),
      window_volume_(ball_volume(kernel_.dim(), spec.radius))
{
}

double ExcursionVolume::operator()(PointConfiguration const& config) const
{
    std::size_t const d = kernel_.dim();
    if (config.dim() != d)
    {
        fail(ErrorCode::dimension_mismatch,
             "excursion volume: configuration dimension differs from kernel");
    }
    std::size_t const n = spec_.nodes;
    double const u = spec_.level;
    std::size_t hits = 0;
    bool const radial = kernel_.kind() != Kernel::Kind::custom;

    if (kernel_.support_radius() && !config.empty())
    {
        double const support = *kernel_.support_radius();
        UniformGrid const grid(config, support);
        std::vector<std::int64_t> c(d);
        std::vector<double> diff(d);
        for (std::size_t i = 0; i < n; ++i)
        {
            std::span<double const> const x(nodes_.data() + i * d, d);
            grid.cell_of(x, c);
            double f = 0;
            grid.visit_block(c, 1, [&](std::span<std::size_t const> cell) {
                for (std::size_t j : cell)
                {
                    auto const y = config.point(j);
                    if (radial)
                    {
                        f += kernel_.radial(std::sqrt(squared_distance(x, y)));
                    }
                    else
                    {
                        for (std::size_t a = 0; a < d; ++a)
                        {
                            diff[a] = x[a] - y[a];
                        }
                        f += kernel_(diff);
                    }
                }
            });
            hits += f >= u ? 1 : 0;
        }
    }
    else if (!config.empty())
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            std::span<double const> const x(nodes_.data() + i * d, d);
            double const f = radial ? [&] {
                double s = 0;
                for (std::size_t j = 0; j < config.size(); ++j)
                {
                    s += kernel_.radial(
                        std::sqrt(squared_distance(x, config.point(j))));
                }
                return s;
            }()
                                    : field_value(kernel_, config, x);
            hits += f >= u ? 1 : 0;
        }
    }
    return window_volume_ * static_cast<double>(hits) / static_cast<double>(n);
}

double excursion_volume(Kernel const& kernel, PointConfiguration const& config,
                        ExcursionSpec const& spec)
{
    return ExcursionVolume(kernel, spec)(config);
}

PoissonModel shotnoise_functional(Kernel const& kernel,
                                  ExcursionSpec const& spec, double intensity)
{
    spec.validate();
    require_positive(intensity, "shot-noise intensity");
    auto const ev = std::make_shared<ExcursionVolume const>(kernel, spec);
    std::ostringstream label;
    label << "shotnoise_F[" << describe_kernel(kernel) << ",u=" << spec.level
          << ",s=" << spec.radius << ",N=" << spec.nodes << "]";
    Functional f(label.str(),
                 [ev](PointConfiguration const& c) { return (*ev)(c); });
    std::vector<double> const center(kernel.dim(), 0.0);
    return {std::move(f), Window::ball(center, spec.radius + spec.margin),
            intensity};
}

EstimateWithCI pair_probability_variance_density(
    Kernel const& kernel, double level, std::span<double const> z,
    std::size_t n_reps, SeedSpec const& seed, double margin, double intensity,
    double ci_level)
{
    std::size_t const d = kernel.dim();
    if (z.size() != d)
    {
        fail(ErrorCode::dimension_mismatch, "lag has wrong dimension");
    }
    require(n_reps >= 2, "pair probability needs n_reps >= 2");
    require(std::isfinite(margin) && margin >= 0, "margin must be >= 0");
    require_positive(intensity, "intensity");

    std::vector<double> center(d);
    for (std::size_t a = 0; a < d; ++a)
    {
        center[a] = z[a] / 2;
    }
    Window const window = Window::ball(center, norm(z) / 2 + margin);
    std::vector<double> const origin(d, 0.0);
    std::vector<double> i0(n_reps);
    std::vector<double> iz(n_reps);
    for (std::size_t r = 0; r < n_reps; ++r)
    {
        PointConfiguration const eta
            = sample_poisson(window, intensity, seed.with_replication(r));
        i0[r] = field_value(kernel, eta, origin) >= level ? 1.0 : 0.0;
        iz[r] = field_value(kernel, eta, z) >= level ? 1.0 : 0.0;
    }
    double const m0 = sample_mean(i0);
    double const mz = sample_mean(iz);
    std::vector<double> prod(n_reps);
    for (std::size_t r = 0; r < n_reps; ++r)
    {
        prod[r] = (i0[r] - m0) * (iz[r] - mz);
    }
    auto const n = static_cast<double>(n_reps);
    EstimateWithCI e = mean_estimate(prod, ci_level);
    e.estimate *= n / (n - 1);
    e.std_error *= n / (n - 1);
    double const zc = normal_critical_value(ci_level);
    e.ci_lo = e.estimate - zc * e.std_error;
    e.ci_hi = e.estimate + zc * e.std_error;
    e.label = "pair_covariance";
    e.seed = seed.master_seed;
    return e;
}
}  // namespace pvlab
