#include "qtoken/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qtoken/parallel.hpp"

namespace qtoken::opt {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, const Vec& x) {
    try {
        const double v = f(x);
        return std::isfinite(v) ? v : inf;
    } catch (const NumericalError&) {
        return inf;
    }
}

}  // namespace

bool Box::degenerate() const {
    for (std::size_t i = 0; i < dim(); ++i)
        if (hi[i] > lo[i]) return false;
    return true;
}

Vec Box::clamp(Vec x) const {
    for (std::size_t i = 0; i < dim(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

void Box::validate() const {
    if (lo.size() != hi.size() || lo.empty()) throw DomainError("box bounds mismatch");
    for (std::size_t i = 0; i < dim(); ++i)
        if (!(lo[i] <= hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw DomainError("box bounds must be finite with lo <= hi");
}

bool better(const Point& a, const Point& b) {
    if (a.f != b.f) return a.f < b.f;
    return !a.x.empty() && !b.x.empty() && a.x[0] < b.x[0];
}

Point differential_evolution(const Objective& f, const Box& box, const DEOptions& opt,
                             std::vector<Point>* final_population, int* evaluations) {
    box.validate();
    if (opt.population < 4) throw DomainError("population must be at least 4");
    const std::size_t d = box.dim();
    const auto np = static_cast<std::size_t>(opt.population);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<Point> pop(np);
    for (auto& p : pop) {
        p.x.resize(d);
        for (std::size_t k = 0; k < d; ++k) p.x[k] = box.lo[k] + u01(rng) * (box.hi[k] - box.lo[k]);
    }
    parallel_for(np, [&](std::size_t i) { pop[i].f = safe_eval(f, pop[i].x); });
    int evals = static_cast<int>(np);

    std::vector<Point> trial(np);
    for (int gen = 0; gen < opt.generations; ++gen) {
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t a, b, c;
            do a = rng() % np; while (a == i);
            do b = rng() % np; while (b == i || b == a);
            do c = rng() % np; while (c == i || c == a || c == b);
            const std::size_t forced = rng() % d;
            trial[i].x = pop[i].x;
            for (std::size_t k = 0; k < d; ++k) {
                const double r = u01(rng);
                if (k != forced && r >= opt.crossover) continue;
                double v = pop[a].x[k] + opt.weight * (pop[b].x[k] - pop[c].x[k]);
                // out-of-box components land between the base vector and the bound
                if (v < box.lo[k]) v = 0.5 * (box.lo[k] + pop[a].x[k]);
                if (v > box.hi[k]) v = 0.5 * (box.hi[k] + pop[a].x[k]);
                trial[i].x[k] = v;
            }
        }
        parallel_for(np, [&](std::size_t i) { trial[i].f = safe_eval(f, trial[i].x); });
        evals += static_cast<int>(np);
        for (std::size_t i = 0; i < np; ++i)
            if (!better(pop[i], trial[i])) pop[i] = trial[i];
    }

    auto best = *std::min_element(pop.begin(), pop.end(), better);
    if (evaluations) *evaluations += evals;
    if (final_population) *final_population = pop;
    if (!std::isfinite(best.f)) throw OptimizationError("no feasible point found", best);
    return best;
}

Point nelder_mead(const Objective& f, const Box& box, const Vec& x0, const NMOptions& opt,
                  int* evaluations) {
    box.validate();
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < box.dim(); ++k)
        if (box.hi[k] > box.lo[k]) active.push_back(k);

    int evals = 0;
    auto eval = [&](const Vec& x) {
        ++evals;
        return safe_eval(f, x);
    };
    Point start{box.clamp(x0), 0.0};
    start.f = eval(start.x);
    if (active.empty()) {
        if (evaluations) *evaluations += evals;
        return start;
    }

    const std::size_t n = active.size();
    std::vector<Point> s(n + 1, start);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = active[j];
        const double step = opt.initial_step * (box.hi[k] - box.lo[k]);
        Vec x = start.x;
        x[k] = x[k] + step <= box.hi[k] ? x[k] + step : x[k] - step;
        s[j + 1] = {x, eval(x)};
    }

    auto combine = [&](const Vec& c, const Vec& w, double t) {
        Vec x = c;
        for (std::size_t k : active) x[k] = c[k] + t * (w[k] - c[k]);
        return box.clamp(x);
    };

    while (evals < opt.max_evaluations) {
        std::sort(s.begin(), s.end(), better);
        const double spread = s.back().f - s.front().f;
        double diam = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t k : active)
                diam = std::max(diam, std::abs(s[j].x[k] - s[0].x[k]) / (box.hi[k] - box.lo[k]));
        if (std::isfinite(spread) && spread <= opt.tolerance && diam <= std::sqrt(opt.tolerance)) break;
        if (diam <= 1e-15) break;

        Vec centroid = s[0].x;
        for (std::size_t k : active) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += s[j].x[k];
            centroid[k] = acc / n;
        }
        const Point& worst = s[n];
        Point refl{combine(centroid, worst.x, -1.0), 0.0};
        refl.f = eval(refl.x);
        if (better(refl, s[0])) {
            Point exp{combine(centroid, worst.x, -2.0), 0.0};
            exp.f = eval(exp.x);
            s[n] = better(exp, refl) ? exp : refl;
        } else if (better(refl, s[n - 1])) {
            s[n] = refl;
        } else {
            const bool outside = better(refl, worst);
            Point con{combine(centroid, outside ? refl.x : worst.x, 0.5), 0.0};
            con.f = eval(con.x);
            if (better(con, outside ? refl : worst)) {
                s[n] = con;
            } else {
                for (std::size_t j = 1; j <= n; ++j) {
                    s[j].x = combine(s[0].x, s[j].x, 0.5);
                    s[j].f = eval(s[j].x);
                }
            }
        }
    }
    if (evaluations) *evaluations += evals;
    return *std::min_element(s.begin(), s.end(), better);
}

Point minimize(const Objective& f, const Box& box, const DEOptions& de, const NMOptions& nm,
               int starts, Trace* trace) {
    box.validate();
    int evals = 0;
    if (box.degenerate()) {
        Point p{box.lo, safe_eval(f, box.lo)};
        if (!std::isfinite(p.f)) throw OptimizationError("objective failed at the only point", p);
        if (trace) *trace = {p, {p}, 1};
        return p;
    }
    std::vector<Point> pop;
    Point de_best = differential_evolution(f, box, de, &pop, &evals);
    std::sort(pop.begin(), pop.end(), better);
    const auto m = std::min<std::size_t>(std::max(starts, 1), pop.size());
    std::vector<Point> seeds(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(m));

    Point best = de_best;
    std::vector<Point> refined(m);
    for (std::size_t i = 0; i < m; ++i) {
        refined[i] = nelder_mead(f, box, seeds[i].x, nm, &evals);
        if (better(refined[i], best)) best = refined[i];
    }
    if (trace) *trace = {de_best, seeds, evals};
    return best;
}

}  // namespace qtoken::opt
