#include "deperr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "deperr/errors.hpp"
#include "deperr/numeric.hpp"

namespace deperr {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

unsigned worker_count(const RngPolicy& policy, std::size_t draws) {
    unsigned w = policy.workers != 0 ? policy.workers : std::max(1u, std::thread::hardware_concurrency());
    constexpr std::size_t kMinDrawsPerWorker = 4096;
    const std::size_t cap = std::max<std::size_t>(1, draws / kMinDrawsPerWorker);
    return static_cast<unsigned>(std::min<std::size_t>(w, cap));
}

// Runs body(begin, end, worker) over contiguous blocks of [0, draws).
template <class Body>
void split_draws(std::size_t draws, unsigned workers, Body&& body) {
    if (workers <= 1) {
        body(std::size_t{0}, draws, 0u);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (draws + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(draws, w * chunk);
        const std::size_t end = std::min(draws, begin + chunk);
        pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    }
}

void require_draws(std::size_t draw_count) {
    if (draw_count == 0) throw DomainError("draw count must be at least 1");
}

struct Shock {
    SubsetMask subset;
    double rate;
};

std::vector<Shock> active_shocks(const SubsetRates& rates) {
    try {
        rates.check();
    } catch (const ValidationError& e) {
        throw DomainError(std::string("invalid shock rates: ") + e.what());
    }
    std::vector<Shock> out;
    for (const auto& [s, rate] : rates.entries()) {
        if (rate > 0.0) out.push_back({s, rate});
    }
    return out;
}

// One draw of the fatal-shock construction written into `out`.
void draw_mome(const std::vector<Shock>& shocks, std::uint64_t seed, std::uint64_t draw, std::span<double> out) {
    std::fill(out.begin(), out.end(), INFINITY);
    for (const Shock& shock : shocks) {
        const double e = -std::log(counter_uniform(seed, draw, shock.subset)) / shock.rate;
        SubsetMask bits = shock.subset;
        for (int i = 0; bits != 0; ++i, bits >>= 1) {
            if ((bits & 1u) && e < out[i]) out[i] = e;
        }
    }
}

// Maps a MOME draw Y onto the model's lifetimes.
struct Transform {
    enum class Kind { Identity, PerComponentPower, ScaledPower } kind = Kind::Identity;
    std::vector<double> inv_shapes;
    std::vector<double> inv_scales;

    void apply(std::span<double> y) const {
        switch (kind) {
            case Kind::Identity: return;
            case Kind::PerComponentPower:
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::pow(y[i], inv_shapes[i]);
                return;
            case Kind::ScaledPower:
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::pow(y[i], inv_shapes[0]) * inv_scales[i];
                return;
        }
    }
};

Transform weibull_transform(const std::vector<double>& shapes, int n) {
    if (static_cast<int>(shapes.size()) != n) throw DomainError("shape vector length does not match rates");
    Transform tr{Transform::Kind::PerComponentPower, {}, {}};
    for (double a : shapes) {
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("shapes must be positive");
        tr.inv_shapes.push_back(1.0 / a);
    }
    return tr;
}

Transform lee_transform(const LeeParams& p) {
    if (!(p.shape > 0.0) || !std::isfinite(p.shape)) throw DomainError("shape must be positive");
    if (static_cast<int>(p.scales.size()) != p.rates.size()) throw DomainError("scale vector length does not match rates");
    Transform tr{Transform::Kind::ScaledPower, {1.0 / p.shape}, {}};
    for (double c : p.scales) {
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scales must be positive");
        tr.inv_scales.push_back(1.0 / c);
    }
    return tr;
}

LifetimeSample sample_with(const SubsetRates& rates, const Transform& tr, std::size_t draw_count, RngPolicy policy) {
    require_draws(draw_count);
    const auto shocks = active_shocks(rates);
    const int n = rates.size();
    LifetimeSample sample(draw_count, n);
    split_draws(draw_count, worker_count(policy, draw_count), [&](std::size_t begin, std::size_t end, unsigned) {
        std::vector<double> y(n);
        for (std::size_t d = begin; d < end; ++d) {
            draw_mome(shocks, policy.seed, d, y);
            tr.apply(y);
            for (int i = 0; i < n; ++i) sample(d, i) = y[i];
        }
    });
    return sample;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t draw, std::uint64_t slot) noexcept {
    std::uint64_t z = splitmix64(seed ^ splitmix64(draw));
    z = splitmix64(z ^ (slot * 0xD1B54A32D192ED03ULL));
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> LifetimeSample::component(int i) const {
    std::vector<double> out(draws());
    for (std::size_t d = 0; d < out.size(); ++d) out[d] = (*this)(d, i);
    return out;
}

LifetimeSample sample_mome(const SubsetRates& rates, std::size_t draw_count, RngPolicy policy) {
    return sample_with(rates, Transform{}, draw_count, policy);
}

LifetimeSample sample_momw(const SubsetRates& rates, const std::vector<double>& shapes, std::size_t draw_count,
                           RngPolicy policy) {
    return sample_with(rates, weibull_transform(shapes, rates.size()), draw_count, policy);
}

LifetimeSample sample_lee(const LeeParams& params, std::size_t draw_count, RngPolicy policy) {
    return sample_with(params.rates, lee_transform(params), draw_count, policy);
}

bool is_samplable(Family f) noexcept {
    switch (f) {
        case Family::IndepExp:
        case Family::MOME:
        case Family::IndepWeibull:
        case Family::MOMW:
        case Family::LeeML:
            return true;
        default:
            return false;
    }
}

SimEstimate estimate_system_sf(const Model& model, Structure structure, double t, std::size_t draw_count,
                               RngPolicy policy) {
    if (!is_samplable(model.family())) {
        throw CapabilityError("family " + std::string(family_name(model.family())) +
                              " has no shock-model sampler; use the finite-difference oracle "
                              "(finite_diff_metric) to validate it instead");
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("simulation requires t > 0 (got t = " + std::to_string(t) + ")");
    require_draws(draw_count);

    const SubsetRates* rates = nullptr;
    Transform tr;
    switch (model.family()) {
        case Family::IndepExp:
        case Family::MOME:
            rates = &model.params<ExponentialParams>().rates;
            break;
        case Family::IndepWeibull:
        case Family::MOMW: {
            const auto& p = model.params<WeibullShockParams>();
            rates = &p.rates;
            tr = weibull_transform(p.shapes, p.rates.size());
            break;
        }
        case Family::LeeML: {
            const auto& p = model.params<LeeParams>();
            rates = &p.rates;
            tr = lee_transform(p);
            break;
        }
        default:
            break;
    }

    const auto shocks = active_shocks(*rates);
    const int n = rates->size();
    const unsigned workers = worker_count(policy, draw_count);
    std::vector<std::uint64_t> hits(std::max(1u, workers), 0);
    split_draws(draw_count, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        std::vector<double> y(n);
        std::uint64_t count = 0;
        for (std::size_t d = begin; d < end; ++d) {
            draw_mome(shocks, policy.seed, d, y);
            tr.apply(y);
            const double lifetime = structure == Structure::Series ? *std::min_element(y.begin(), y.end())
                                                                   : *std::max_element(y.begin(), y.end());
            if (lifetime > t) ++count;
        }
        hits[w] = count;
    });

    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    const double n_samples = static_cast<double>(draw_count);
    const double p = static_cast<double>(total) / n_samples;
    return {p, std::sqrt(p * (1.0 - p) / n_samples), draw_count, policy.seed};
}

double finite_diff_metric(const Model& model, Metric metric, double t, double step) {
    if (metric == Metric::SF) throw DomainError("finite-difference oracle covers fr, rhr and ai only");
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("finite difference requires t > 0 (got t = " + std::to_string(t) + ")");
    if (!(step > 0.0) || step > 1e-2) throw DomainError("relative step must lie in (0, 1e-2]");

    const double h = std::min(std::max(step * t, 1e-8), 0.5 * t);
    auto log_sf = [&](double u) {
        const double v = series_log_sf(model, u);
        if (v == 0.0 || !std::isfinite(v)) {
            throw SingularityError("survival is 1 or 0 at stencil point t = " + std::to_string(u));
        }
        return v;
    };
    auto central = [&](auto&& f, double hh) { return (f(t + hh) - f(t - hh)) / (2.0 * hh); };
    auto richardson = [&](auto&& f) { return (4.0 * central(f, 0.5 * h) - central(f, h)) / 3.0; };

    const double cum = -log_sf(t);
    switch (metric) {
        case Metric::FR:
            return richardson([&](double u) { return -log_sf(u); });
        case Metric::AI:
            return t * richardson([&](double u) { return -log_sf(u); }) / cum;
        case Metric::RHR: {
            // f = -dSF/dt; F = 1 - SF
            const double density = richardson([&](double u) { return -std::exp(log_sf(u)); });
            return density / -std::expm1(-cum);
        }
        default:
            break;
    }
    throw DomainError("unsupported metric");
}

}  // namespace deperr
