#include "qf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double pow_abs(double base, double expo) {
    if (expo == 0.0) return 1.0;
    return std::pow(std::abs(base), expo);
}

struct FamilyView {
    const std::vector<double>* sigma = nullptr;
    const std::vector<double>* alpha = nullptr;
};

FamilyView sobolev_view(const CoefficientSpec& spec) {
    if (auto* s = std::get_if<SobolevDerivative>(&spec.family)) return {&s->sigma, &s->alpha};
    if (auto* t = std::get_if<TwoSampleNorm>(&spec.family)) return {&t->sigma, &t->alpha};
    return {};
}

Coefficients sobolev_coeff(const std::vector<double>& sigma, const std::vector<double>& alpha,
                           const MultiIndex& l) {
    double c = 0.0, q = 1.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        double u = kTwoPi * l[j];
        c += pow_abs(u, 2.0 * sigma[j]);
        q *= pow_abs(u, 2.0 * alpha[j]);
    }
    return {c, q};
}

Coefficients single_index_coeff(const SingleIndex& f, const MultiIndex& l) {
    double c = 0.0, norm2 = 0.0, proj = 0.0;
    for (std::size_t j = 0; j < f.beta.size(); ++j) {
        double u = kTwoPi * l[j];
        c += pow_abs(u, 2.0 * f.sigma);
        norm2 += static_cast<double>(l[j]) * l[j];
        proj += f.beta[j] * l[j];
    }
    double q = kTwoPi * kTwoPi * (norm2 - proj * proj);
    // exact zero on the line parallel to beta; guard roundoff
    if (q < 1e-9 * kTwoPi * kTwoPi * norm2) q = 0.0;
    return {c, q};
}

// Per-axis box radius implied by c_l < T|q_l|, or nullopt when the active
// set need not be finite (single-index with sigma <= 1).
std::optional<std::vector<long>> axis_seed_bound(const CoefficientSpec& spec, double T) {
    if (auto fv = sobolev_view(spec); fv.sigma) {
        double delta = spec.delta();
        double B = std::max({std::pow(T, 1.0 / (1.0 - delta)), T, 1.0});
        std::vector<long> L(fv.sigma->size());
        for (std::size_t j = 0; j < L.size(); ++j)
            L[j] = static_cast<long>(std::floor(std::pow(B, 1.0 / (2.0 * (*fv.sigma)[j])) / kTwoPi));
        return L;
    }
    if (auto* si = std::get_if<SingleIndex>(&spec.family)) {
        if (si->sigma <= 1.0) return std::nullopt;
        double d = static_cast<double>(si->beta.size());
        double U = std::pow(std::max(T * d, 1.0), 1.0 / (2.0 * si->sigma - 2.0));
        return std::vector<long>(si->beta.size(), static_cast<long>(std::floor(U / kTwoPi)) );
    }
    return std::nullopt;  // FiniteList handled separately
}

// Odometer scan of the box prod [-L_j, L_j], skipping the origin and,
// when `inner` is given, every point that already lies in the inner box.
template <class F>
void scan_box(const std::vector<long>& L, const std::vector<long>* inner, std::size_t& budget,
              const std::size_t max_points, F&& visit) {
    const std::size_t d = L.size();
    std::vector<long> l(d);
    for (std::size_t j = 0; j < d; ++j) l[j] = -L[j];
    for (;;) {
        bool skip = std::all_of(l.begin(), l.end(), [](long v) { return v == 0; });
        if (!skip && inner) {
            bool inside = true;
            for (std::size_t j = 0; j < d; ++j)
                if (std::labs(l[j]) > (*inner)[j]) { inside = false; break; }
            skip = inside;
        }
        if (!skip) {
            if (++budget > max_points)
                throw ActiveSetTooLarge("active set enumeration exceeded the point budget");
            visit(l);
        }
        std::size_t axis = 0;
        while (axis < d) {
            if (++l[axis] <= L[axis]) break;
            l[axis] = -L[axis];
            ++axis;
        }
        if (axis == d) break;
    }
}

}  // namespace

int CoefficientSpec::dimension() const {
    return std::visit(
        [](const auto& f) -> int {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SobolevDerivative> || std::is_same_v<T, TwoSampleNorm>)
                return static_cast<int>(f.sigma.size());
            else if constexpr (std::is_same_v<T, SingleIndex>)
                return static_cast<int>(f.beta.size());
            else
                return f.ambient_dimension;
        },
        family);
}

bool CoefficientSpec::two_sample() const {
    return std::holds_alternative<TwoSampleNorm>(family);
}

int CoefficientSpec::ambient_dimension() const {
    return two_sample() ? 2 * dimension() : dimension();
}

bool CoefficientSpec::nonnegative() const {
    if (two_sample()) return false;
    if (auto* fl = std::get_if<FiniteList>(&family)) {
        for (const auto& e : fl->entries)
            if (e.q < 0) return false;
    }
    return true;
}

double CoefficientSpec::delta() const {
    auto fv = sobolev_view(*this);
    if (!fv.sigma) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < fv.sigma->size(); ++j) s += (*fv.alpha)[j] / (*fv.sigma)[j];
    return s;
}

double CoefficientSpec::sigma_bar() const {
    auto fv = sobolev_view(*this);
    const std::vector<double>* sig = fv.sigma;
    if (!sig) {
        if (auto* si = std::get_if<SingleIndex>(&family)) return si->sigma;
        throw std::domain_error("sigma_bar: finite-list family has no smoothness parameter");
    }
    double inv = 0.0;
    for (double s : *sig) inv += 1.0 / s;
    return static_cast<double>(sig->size()) / inv;
}

void CoefficientSpec::validate() const {
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SobolevDerivative> || std::is_same_v<T, TwoSampleNorm>) {
                if (f.sigma.empty() || f.sigma.size() != f.alpha.size())
                    throw std::domain_error("spec: sigma and alpha must have equal positive length");
                for (double s : f.sigma)
                    if (!(s > 0)) throw std::domain_error("spec: sigma_j must be positive");
                for (double a : f.alpha)
                    if (!(a >= 0)) throw std::domain_error("spec: alpha_j must be nonnegative");
                if (!(delta() < 1.0)) throw std::domain_error("spec: delta = sum alpha_j/sigma_j must be < 1");
                if (!(sigma_bar() > dimension() / 4.0))
                    throw std::domain_error("spec: harmonic mean sigma_bar must exceed d/4");
            } else if constexpr (std::is_same_v<T, SingleIndex>) {
                if (f.beta.empty()) throw std::domain_error("spec: beta must be nonempty");
                double n2 = 0.0;
                for (double b : f.beta) n2 += b * b;
                if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
                    throw std::domain_error("spec: beta must be a unit vector (within 1e-12)");
                if (!(f.sigma > dimension() / 4.0))
                    throw std::domain_error("spec: sigma must exceed d/4");
            } else {
                if (f.entries.empty()) throw std::domain_error("spec: finite list must be nonempty");
                for (const auto& e : f.entries)
                    if (e.c < 0) throw std::domain_error("spec: finite list c entries must be nonnegative");
            }
        },
        family);
}

Coefficients coeff(const CoefficientSpec& spec, const Index& ix) {
    return std::visit(
        [&](const auto& f) -> Coefficients {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, SobolevDerivative>) {
                if (ix.tag != 0) throw std::domain_error("coeff: plain family takes untagged indices");
                if (is_zero(ix.lattice)) throw std::domain_error("coeff: zero lattice index excluded");
                return sobolev_coeff(f.sigma, f.alpha, ix.lattice);
            } else if constexpr (std::is_same_v<T, TwoSampleNorm>) {
                if (ix.tag != 1 && ix.tag != 2)
                    throw std::domain_error("coeff: two-sample index needs tag 1 or 2");
                if (is_zero(ix.lattice)) throw std::domain_error("coeff: zero lattice index excluded");
                auto cq = sobolev_coeff(f.sigma, f.alpha, ix.lattice);
                cq.q *= (ix.tag == 1) ? -1.0 : 1.0;
                return cq;
            } else if constexpr (std::is_same_v<T, SingleIndex>) {
                if (ix.tag != 0) throw std::domain_error("coeff: plain family takes untagged indices");
                if (is_zero(ix.lattice)) throw std::domain_error("coeff: zero lattice index excluded");
                return single_index_coeff(f, ix.lattice);
            } else {
                for (const auto& e : f.entries)
                    if (e.index == ix) return {e.c, e.q};
                throw std::domain_error("coeff: index not present in the finite list");
            }
        },
        spec.family);
}

namespace {

// Emit a lattice point's coefficient entries (two tags for the two-sample
// family) when they belong to N(T).
template <class F>
void emit_if_active(const CoefficientSpec& spec, double T, const MultiIndex& l, F&& visit) {
    if (std::holds_alternative<TwoSampleNorm>(spec.family)) {
        const auto& f = std::get<TwoSampleNorm>(spec.family);
        auto cq = sobolev_coeff(f.sigma, f.alpha, l);
        if (cq.q != 0.0 && cq.c < T * cq.q) {
            visit(Index{l, 1}, cq.c, -cq.q);
            visit(Index{l, 2}, cq.c, cq.q);
        }
        return;
    }
    Coefficients cq{0.0, 0.0};
    if (auto* s = std::get_if<SobolevDerivative>(&spec.family))
        cq = sobolev_coeff(s->sigma, s->alpha, l);
    else
        cq = single_index_coeff(std::get<SingleIndex>(spec.family), l);
    if (cq.q != 0.0 && cq.c < T * std::abs(cq.q)) visit(Index{l, 0}, cq.c, cq.q);
}

}  // namespace

void for_each_active(const CoefficientSpec& spec, double T,
                     const std::function<void(const Index&, double, double)>& visit,
                     const EnumerationLimits& limits) {
    spec.validate();
    if (!(T > 0)) throw std::domain_error("active_set: T must be positive");

    if (auto* fl = std::get_if<FiniteList>(&spec.family)) {
        for (const auto& e : fl->entries)
            if (e.q != 0.0 && e.c < T * std::abs(e.q)) visit(e.index, e.c, e.q);
        return;
    }

    std::size_t budget = 0;
    auto seed = axis_seed_bound(spec, T);
    bool seeded = seed.has_value();
    std::vector<long> L = seeded ? *seed : std::vector<long>(spec.dimension(), 1);
    for (long& v : L) v = std::max(v, 0L);

    auto member = [&](const std::vector<long>& pt) {
        MultiIndex l(pt.begin(), pt.end());
        emit_if_active(spec, T, l, visit);
    };

    scan_box(L, nullptr, budget, limits.max_points, member);

    // Grow until a full outer shell contributes nothing.  With an analytic
    // seed the first shell is provably empty and only certifies the bound.
    for (;;) {
        std::vector<long> next(L);
        for (long& v : next) v += seeded ? 1 : std::max(v, 1L);
        for (long v : next)
            if (v > limits.max_axis_extent)
                throw ActiveSetTooLarge("active set too large: axis extent cap reached");
        bool found = false;
        scan_box(next, &L, budget, limits.max_points, [&](const std::vector<long>& pt) {
            MultiIndex l(pt.begin(), pt.end());
            emit_if_active(spec, T, l, [&](const Index& ix, double c, double q) {
                found = true;
                visit(ix, c, q);
            });
        });
        if (!found) break;
        L = next;
    }
}

ActiveSet active_set(const CoefficientSpec& spec, double T, const EnumerationLimits& limits) {
    struct Row {
        Index ix;
        double c, q;
    };
    std::vector<Row> rows;
    for_each_active(spec, T, [&](const Index& ix, double c, double q) { rows.push_back({ix, c, q}); },
                    limits);
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ix < b.ix; });

    ActiveSet out;
    out.threshold = T;
    out.indices.reserve(rows.size());
    out.c.reserve(rows.size());
    out.q.reserve(rows.size());
    for (auto& r : rows) {
        out.indices.push_back(std::move(r.ix));
        out.c.push_back(r.c);
        out.q.push_back(r.q);
    }
    return out;
}

namespace {

void accumulate(SpectralSums& s, double T, double c, double q) {
    double plus = q - c / T;
    if (plus > 0.0) {
        s.I0 += plus * plus;
        s.I1 += q * plus;
    }
    s.M += q * q;
    if (q > 0.0)
        s.M_plus += q * q;
    else
        s.M_minus += q * q;
    ++s.count;
}

}  // namespace

SpectralSums spectral_sums(const ActiveSet& set) {
    SpectralSums s;
    std::size_t n_plus = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        accumulate(s, set.threshold, set.c[i], set.q[i]);
        if (set.q[i] > 0) ++n_plus;
    }
    s.I2 = s.I1 - s.I0;
    s.N_star = (s.M_plus > s.M_minus) ? n_plus : set.size() - n_plus;
    return s;
}

SpectralSums spectral_sums(const CoefficientSpec& spec, double T, const EnumerationLimits& limits) {
    SpectralSums s;
    std::size_t n_plus = 0;
    for_each_active(spec, T,
                    [&](const Index&, double c, double q) {
                        accumulate(s, T, c, q);
                        if (q > 0) ++n_plus;
                    },
                    limits);
    s.I2 = s.I1 - s.I0;
    s.N_star = (s.M_plus > s.M_minus) ? n_plus : s.count - n_plus;
    return s;
}

double first_entry_threshold(const CoefficientSpec& spec) {
    spec.validate();
    if (auto* fl = std::get_if<FiniteList>(&spec.family)) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : fl->entries)
            if (e.q != 0.0) best = std::min(best, e.c / std::abs(e.q));
        if (!std::isfinite(best)) throw std::domain_error("first_entry_threshold: S_F is empty");
        return best;
    }

    const int d = spec.dimension();
    double sigma_min = std::numeric_limits<double>::infinity();
    if (auto fv = sobolev_view(spec); fv.sigma)
        for (double s : *fv.sigma) sigma_min = std::min(sigma_min, s);
    else
        sigma_min = std::get<SingleIndex>(spec.family).sigma;

    double best = std::numeric_limits<double>::infinity();
    std::size_t budget = 0;
    long L = 2;
    for (;;) {
        std::vector<long> box(d, L);
        scan_box(box, nullptr, budget, EnumerationLimits{}.max_points, [&](const std::vector<long>& pt) {
            MultiIndex l(pt.begin(), pt.end());
            Coefficients cq{0, 0};
            if (auto fv = sobolev_view(spec); fv.sigma)
                cq = sobolev_coeff(*fv.sigma, *fv.alpha, l);
            else
                cq = single_index_coeff(std::get<SingleIndex>(spec.family), l);
            if (cq.q != 0.0) best = std::min(best, cq.c / std::abs(cq.q));
        });
        // Outside the box, c/|q| >= V^{1-delta} (derivative families) or
        // V^{1-1/sigma}/d (single index), V = (2pi(L+1))^{2 sigma_min}.
        double V = std::pow(kTwoPi * (L + 1), 2.0 * sigma_min);
        double outside;
        if (sobolev_view(spec).sigma)
            outside = std::pow(std::max(V, 1.0), 1.0 - spec.delta());
        else {
            double sig = std::get<SingleIndex>(spec.family).sigma;
            outside = sig > 1.0 ? std::pow(V, 1.0 - 1.0 / sig) / d : 0.0;
        }
        if (std::isfinite(best) && outside >= best) return best;
        if (L > (1L << 20))
            throw ActiveSetTooLarge("first_entry_threshold: no finite lower bound on c/|q|");
        L *= 2;
    }
}

double inf_abs_q_over_support(const CoefficientSpec& spec) {
    if (auto fv = sobolev_view(spec); fv.sigma) {
        double q = 1.0;
        for (std::size_t j = 0; j < fv.alpha->size(); ++j)
            if ((*fv.alpha)[j] > 0) q *= std::pow(kTwoPi, 2.0 * (*fv.alpha)[j]);
        return q;
    }
    if (auto* fl = std::get_if<FiniteList>(&spec.family)) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : fl->entries)
            if (e.q != 0.0) best = std::min(best, std::abs(e.q));
        return best;
    }
    // single index: approximate over a modest box (the true infimum can be 0
    // for irrational directions)
    const auto& si = std::get<SingleIndex>(spec.family);
    double best = std::numeric_limits<double>::infinity();
    std::size_t budget = 0;
    std::vector<long> box(si.beta.size(), 6);
    scan_box(box, nullptr, budget, EnumerationLimits{}.max_points, [&](const std::vector<long>& pt) {
        MultiIndex l(pt.begin(), pt.end());
        auto cq = single_index_coeff(si, l);
        if (cq.q != 0.0) best = std::min(best, cq.q);
    });
    return best;
}

std::vector<Index> low_c_complement(const CoefficientSpec& spec, double T,
                                    const EnumerationLimits& limits) {
    spec.validate();
    std::vector<Index> out;
    if (auto* fl = std::get_if<FiniteList>(&spec.family)) {
        for (const auto& e : fl->entries)
            if (e.q == 0.0 && e.c < T) out.push_back(e.index);
        std::sort(out.begin(), out.end());
        return out;
    }

    const int d = spec.dimension();
    std::vector<long> L(d);
    if (auto fv = sobolev_view(spec); fv.sigma) {
        bool any_alpha = false;
        for (double a : *fv.alpha) any_alpha |= a > 0;
        if (!any_alpha) return out;  // q never vanishes: S_F^c is empty
        for (int j = 0; j < d; ++j)
            L[j] = static_cast<long>(std::floor(std::pow(std::max(T, 0.0), 1.0 / (2.0 * (*fv.sigma)[j])) / kTwoPi));
    } else {
        double sig = std::get<SingleIndex>(spec.family).sigma;
        long R = static_cast<long>(std::floor(std::pow(std::max(T, 0.0), 1.0 / (2.0 * sig)) / kTwoPi));
        L.assign(d, R);
    }

    std::size_t budget = 0;
    scan_box(L, nullptr, budget, limits.max_points, [&](const std::vector<long>& pt) {
        MultiIndex l(pt.begin(), pt.end());
        if (std::holds_alternative<TwoSampleNorm>(spec.family)) {
            const auto& f = std::get<TwoSampleNorm>(spec.family);
            auto cq = sobolev_coeff(f.sigma, f.alpha, l);
            if (cq.q == 0.0 && cq.c < T) {
                out.push_back(Index{l, 1});
                out.push_back(Index{l, 2});
            }
        } else {
            Coefficients cq{0, 0};
            if (auto fv = sobolev_view(spec); fv.sigma)
                cq = sobolev_coeff(*fv.sigma, *fv.alpha, l);
            else
                cq = single_index_coeff(std::get<SingleIndex>(spec.family), l);
            if (cq.q == 0.0 && cq.c < T) out.push_back(Index{l, 0});
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qf
