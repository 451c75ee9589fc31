#include "dyngreen/tfd.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <algorithm>
#include <numbers>
#include <random>

#include "dyngreen/polyroots.hpp"
#include "parallel.hpp"

namespace dyngreen {

namespace {

using Rng = std::mt19937_64;
using C = std::complex<double>;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

struct Restart {
    Configuration config;
    double sum = -std::numeric_limits<double>::infinity();  // sum_{i<j} log|z_i ^ z_j|
    long iterations = 0;
    bool ok = false;
};

// ---- archimedean -----------------------------------------------------------

struct ArchSearch {
    const LocalHeight& h;
    int n;
    double tol;
    std::vector<C> f1, f2;

    struct Normalized {
        ComplexLift lift;
        double err;
    };

    Normalized normalize(const ComplexLift& raw) const {
        const auto hv = h(raw, tol);
        const double s = std::exp(-hv.value);
        return {{raw.z0 * s, raw.z1 * s}, hv.err};
    }

    ComplexLift uniform_point(Rng& rng) const {
        const double r = std::sqrt(uniform(rng));
        const double theta = 2.0 * std::numbers::pi * uniform(rng);
        const C u = std::polar(r, theta);
        return uniform(rng) < 0.5 ? ComplexLift{u, 1.0} : ComplexLift{1.0, u};
    }

    std::optional<ComplexLift> preimage(const ComplexLift& target, Rng& rng) const {
        std::vector<C> poly(f1.size());
        for (std::size_t i = 0; i < f1.size(); ++i) poly[i] = target.z1 * f1[i] - target.z0 * f2[i];
        std::vector<C> roots;
        try {
            roots = polynomial_roots(poly);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (roots.empty()) return ComplexLift{1.0, 0.0};
        const auto k = static_cast<std::size_t>(uniform(rng) * static_cast<double>(roots.size())) % roots.size();
        return ComplexLift{roots[k], 1.0};
    }

    ComplexLift perturb(const ComplexLift& z, double sigma, Rng& rng) const {
        const C step(sigma * gaussian(rng), sigma * gaussian(rng));
        if (std::abs(z.z0) <= std::abs(z.z1)) return {z.z0 / z.z1 + step, 1.0};
        return {1.0, z.z1 / z.z0 + step};
    }

    Restart run(std::uint64_t seed, long iterations) const {
        Rng rng(seed);
        Restart out;
        std::vector<ComplexLift> pts;
        std::vector<double> errs;
        for (int tries = 0; static_cast<int>(pts.size()) < n && tries < 100 * n; ++tries) {
            auto c = normalize(uniform_point(rng));
            bool distinct = true;
            for (const auto& q : pts) distinct = distinct && wedge(c.lift, q) != 0.0;
            if (!distinct) continue;
            pts.push_back(c.lift);
            errs.push_back(c.err);
        }
        if (static_cast<int>(pts.size()) < n) return out;

        const auto un = static_cast<std::size_t>(n);
        std::vector<std::vector<double>> logs(un, std::vector<double>(un, 0.0));
        for (std::size_t i = 0; i < un; ++i) {
            for (std::size_t j = i + 1; j < un; ++j) logs[i][j] = logs[j][i] = std::log(std::abs(wedge(pts[i], pts[j])));
        }
        double sigma = 0.3;
        std::vector<double> row(un);
        for (long it = 0; it < iterations; ++it) {
            const auto i = static_cast<std::size_t>(it % n);
            const double u = uniform(rng);
            const bool is_perturb = u >= 0.45;
            std::optional<ComplexLift> raw;
            if (u < 0.25) {
                raw = uniform_point(rng);
            } else if (u < 0.45) {
                raw = preimage(pts[static_cast<std::size_t>(uniform(rng) * n) % un], rng);
            } else {
                raw = perturb(pts[i], sigma, rng);
            }
            if (!raw || (raw->z0 == 0.0 && raw->z1 == 0.0) || !std::isfinite(std::abs(raw->z0)) ||
                !std::isfinite(std::abs(raw->z1))) {
                continue;
            }
            const auto cand = normalize(*raw);
            double delta = 0.0;
            bool valid = true;
            for (std::size_t j = 0; j < un && valid; ++j) {
                if (j == i) continue;
                const double a = std::abs(wedge(cand.lift, pts[j]));
                if (!(a > 0.0)) valid = false;
                row[j] = std::log(a);
                delta += row[j] - logs[i][j];
            }
            if (valid && delta > 0.0) {
                pts[i] = cand.lift;
                errs[i] = cand.err;
                for (std::size_t j = 0; j < un; ++j) {
                    if (j != i) logs[i][j] = logs[j][i] = row[j];
                }
                if (is_perturb) sigma = std::min(1.0, sigma * 1.5);
            } else if (is_perturb) {
                sigma = std::max(1e-10, sigma * 0.97);
            }
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < un; ++i) {
            for (std::size_t j = i + 1; j < un; ++j) sum += logs[i][j];
        }
        out.sum = sum;
        out.iterations = iterations;
        out.ok = true;
        out.config.place = h.place();
        out.config.complex_lifts = std::move(pts);
        out.config.height_err = *std::max_element(errs.begin(), errs.end());
        out.config.objective = 2.0 * sum / (static_cast<double>(n) * (n - 1));
        return out;
    }
};

// ---- finite places ---------------------------------------------------------

struct FiniteSearch {
    const LocalHeight& h;
    int n;
    double tol;
    Int p;
    long height_box;

    struct Candidate {
        Lift primitive;  // coprime integers
        long shift;      // normalized lift = p^shift * primitive
    };

    std::optional<Candidate> make(Int a, Int b) const {
        if (a == 0 && b == 0) return std::nullopt;
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        a /= g;
        b /= g;
        if (b < 0 || (b == 0 && a < 0)) {
            a = -a;
            b = -b;
        }
        Lift z{Rat(a), Rat(b)};
        const auto nl = normalize_lift(h, z, tol);
        return Candidate{z, nl.shift};
    }

    Int random_int(Rng& rng, long box) const {
        return Int(std::uniform_int_distribution<long>(-box, box)(rng));
    }

    std::optional<Candidate> uniform_point(Rng& rng) const {
        return make(random_int(rng, height_box), Int(std::uniform_int_distribution<long>(0, height_box)(rng)));
    }

    std::optional<Candidate> perturb(const Candidate& c, Rng& rng) const {
        const auto k = std::uniform_int_distribution<unsigned long>(0, 4)(rng);
        Int step;
        mpz_pow_ui(step.get_mpz_t(), p.get_mpz_t(), k);
        step *= random_int(rng, 3);
        Int a(c.primitive.z0.get_num());
        Int b(c.primitive.z1.get_num());
        if (uniform(rng) < 0.5) a += step;
        else b += step;
        return make(a, b);
    }

    long pair_valuation(const Candidate& x, const Candidate& y) const {
        const Rat w = wedge(x.primitive, y.primitive);
        if (w == 0) return std::numeric_limits<long>::max();
        return valuation(w, p) + x.shift + y.shift;
    }

    Restart run(std::uint64_t seed, long iterations) const {
        Rng rng(seed);
        Restart out;
        std::vector<Candidate> pts;
        for (int tries = 0; static_cast<int>(pts.size()) < n && tries < 1000 * n; ++tries) {
            auto c = uniform_point(rng);
            if (!c) continue;
            bool distinct = true;
            for (const auto& q : pts) distinct = distinct && pair_valuation(*c, q) != std::numeric_limits<long>::max();
            if (distinct) pts.push_back(*c);
        }
        if (static_cast<int>(pts.size()) < n) return out;
        const auto un = static_cast<std::size_t>(n);
        std::vector<std::vector<long>> val(un, std::vector<long>(un, 0));
        for (std::size_t i = 0; i < un; ++i) {
            for (std::size_t j = i + 1; j < un; ++j) val[i][j] = val[j][i] = pair_valuation(pts[i], pts[j]);
        }
        std::vector<long> row(un);
        for (long it = 0; it < iterations; ++it) {
            const auto i = static_cast<std::size_t>(it % n);
            const auto cand = uniform(rng) < 0.5 ? uniform_point(rng) : perturb(pts[i], rng);
            if (!cand) continue;
            long delta = 0;
            bool valid = true;
            for (std::size_t j = 0; j < un && valid; ++j) {
                if (j == i) continue;
                row[j] = pair_valuation(*cand, pts[j]);
                if (row[j] == std::numeric_limits<long>::max()) valid = false;
                else delta += row[j] - val[i][j];
            }
            if (valid && delta < 0) {
                pts[i] = *cand;
                for (std::size_t j = 0; j < un; ++j) {
                    if (j != i) val[i][j] = val[j][i] = row[j];
                }
            }
        }
        long total = 0;
        for (std::size_t i = 0; i < un; ++i) {
            for (std::size_t j = i + 1; j < un; ++j) total += val[i][j];
        }
        const double lp = h.place().log_prime();
        out.sum = -static_cast<double>(total) * lp;
        out.iterations = iterations;
        out.ok = true;
        out.config.place = h.place();
        for (const auto& c : pts) {
            Rat factor(1);
            if (c.shift >= 0) mpz_pow_ui(factor.get_num_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(c.shift));
            else mpz_pow_ui(factor.get_den_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-c.shift));
            out.config.rational_lifts.push_back({c.primitive.z0 * factor, c.primitive.z1 * factor});
        }
        out.config.objective = 2.0 * out.sum / (static_cast<double>(n) * (n - 1));
        return out;
    }
};

}  // namespace

D0nEstimate d0n_estimate(const MapPair& f, const Place& v, int n, std::uint64_t seed, const TfdOptions& options) {
    if (n < 2) throw DomainError("d0_n needs n >= 2");
    const LocalHeight h(f, v);
    const unsigned restarts = std::max(1u, options.restarts);
    std::vector<Restart> results(restarts);

    auto seed_for = [&](unsigned r) { return splitmix(seed * 0x100000001b3ULL + r); };
    if (v.is_archimedean()) {
        ArchSearch search{h, n, options.tol, {}, {}};
        for (const auto& c : f.f1().coeffs()) search.f1.emplace_back(c.get_d());
        for (const auto& c : f.f2().coeffs()) search.f2.emplace_back(c.get_d());
        detail::parallel_for(restarts, options.workers,
                             [&](std::size_t r) { results[r] = search.run(seed_for(static_cast<unsigned>(r)), options.iterations); });
    } else {
        const long box = std::max(16L, 2L * static_cast<long>(v.prime().get_ui()));
        FiniteSearch search{h, n, options.tol, v.prime(), box};
        detail::parallel_for(restarts, options.workers,
                             [&](std::size_t r) { results[r] = search.run(seed_for(static_cast<unsigned>(r)), options.iterations); });
    }

    D0nEstimate out;
    std::optional<unsigned> best;
    for (unsigned r = 0; r < restarts; ++r) {
        out.iterations += results[r].iterations;
        if (!results[r].ok) continue;
        if (!best || results[r].sum > results[*best].sum) best = r;
    }
    if (!best) throw ConvergenceError("no valid configuration of " + std::to_string(n) + " distinct points found");
    out.config = std::move(results[*best].config);
    out.estimate = std::exp(out.config.objective);
    out.best_seed = seed_for(*best);
    return out;
}

double tfd_bound(const MapPair& f, const Place& v) { return std::exp(-r_of(f, v)); }

bool validate_configuration(const LocalHeight& h, const Configuration& c, double tol) {
    if (h.place().is_archimedean()) {
        const auto& pts = c.complex_lifts;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (wedge(pts[i], pts[j]) == 0.0) return false;
            }
            const auto hv = h(pts[i], tol);
            if (std::abs(hv.value) > hv.err + c.height_err + tol + 1e-12) return false;
        }
        return true;
    }
    const auto& pts = c.rational_lifts;
    const double lp = h.place().log_prime();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (wedge(pts[i], pts[j]) == 0) return false;
        }
        const auto hv = h(pts[i], tol);
        if (hv.value > hv.err + tol || hv.value < -lp - hv.err - tol) return false;
    }
    return true;
}

bool TfdReport::all_ok() const {
    for (const auto& row : rows) {
        if (!row.chain_ok || !row.upper_ok || !row.valid) return false;
    }
    return true;
}

TfdReport verify_tfd_inequality(const MapPair& f, const Place& v, const std::vector<int>& n_list, std::uint64_t seed,
                                const TfdOptions& options) {
    const LocalHeight h(f, v);
    TfdReport report;
    report.place = v;
    report.C = effective_C(h).C;
    const double bound = tfd_bound(f, v);
    for (const int n : n_list) {
        const auto est = d0n_estimate(f, v, n, seed, options);
        TfdRow row;
        row.n = n;
        row.estimate = est.estimate;
        row.bound = bound;
        row.iterations = est.iterations;
        row.objective = est.config.objective;
        const double ratio = std::log(static_cast<double>(n)) / (n - 1.0);
        row.slack = std::exp(report.C * ratio) - 1.0;
        row.chain_rhs = report.C * ratio - h.r();
        row.chain_ok = row.objective <= row.chain_rhs + 2.0 * est.config.height_err + 1e-12;
        row.upper_ok = row.estimate <= (1.0 + row.slack) * bound + 1e-6;
        row.valid = validate_configuration(h, est.config, options.tol);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace dyngreen
