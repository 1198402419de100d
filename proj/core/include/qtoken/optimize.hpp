#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qtoken/errors.hpp"

namespace qtoken::opt {

using Vec = std::vector<double>;
using Objective = std::function<double(const Vec&)>;

struct Box {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }
    bool degenerate() const;
    Vec clamp(Vec x) const;
    void validate() const;
};

struct Point {
    Vec x;
    double f = 0.0;
};

// Lower objective wins; exact ties go to the smaller first coordinate.
bool better(const Point& a, const Point& b);

struct DEOptions {
    int population = 32;
    int generations = 400;
    double weight = 0.7;     // differential weight
    double crossover = 0.9;
    std::uint64_t seed = 1;
};

struct NMOptions {
    double tolerance = 1e-12;
    double initial_step = 0.02;  // fraction of the box width
    int max_evaluations = 6000;
};

class OptimizationError : public NumericalError {
public:
    OptimizationError(const std::string& what, Point best)
        : NumericalError(what), best_(std::move(best)) {}
    const Point& best() const { return best_; }

private:
    Point best_;
};

struct Trace {
    Point de_best;
    std::vector<Point> starts;
    int evaluations = 0;
};

Point differential_evolution(const Objective& f, const Box& box, const DEOptions& opt,
                             std::vector<Point>* final_population = nullptr,
                             int* evaluations = nullptr);
Point nelder_mead(const Objective& f, const Box& box, const Vec& x0, const NMOptions& opt,
                  int* evaluations = nullptr);

// Differential evolution followed by Nelder-Mead from the best `starts` members.
Point minimize(const Objective& f, const Box& box, const DEOptions& de, const NMOptions& nm,
               int starts = 3, Trace* trace = nullptr);

}  // namespace qtoken::opt
