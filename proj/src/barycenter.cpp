#include "pmot/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "unit_column_lp.hpp"

namespace pmot {

namespace {

struct LocalPoint {
    bool diag;
    double b, d;    // coordinates when !diag
    double delta;   // distance to the diagonal, 0 for the diagonal element
};

std::vector<LocalPoint> flatten(std::span<const QuotientPoint> points) {
    std::vector<LocalPoint> out;
    out.reserve(points.size());
    for (const auto& q : points) {
        if (q.is_diagonal())
            out.push_back({true, 0.0, 0.0, 0.0});
        else
            out.push_back({false, q.point().birth, q.point().death,
                           distance_to_diagonal(q.point())});
    }
    return out;
}

double local_objective(const std::vector<LocalPoint>& pts, std::span<const double> w, double p,
                       double u, double v) {
    // v > u assumed; the boundary case is covered by the diagonal objective
    const double t = (v - u) / sqrt2;
    double f = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double r;
        if (pts[i].diag) {
            r = t;
        } else {
            const double dx = pts[i].b - u, dy = pts[i].d - v;
            r = std::min(std::sqrt(dx * dx + dy * dy), pts[i].delta + t);
        }
        f += w[i] * power(r, p);
    }
    return f;
}

double diagonal_objective(const std::vector<LocalPoint>& pts, std::span<const double> w, double p) {
    double f = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) f += w[i] * power(pts[i].delta, p);
    return f;
}

struct Candidate {
    double u, v, value;
};

// Quadratic minimizer when the inputs indexed by the mask are matched
// directly and the rest go through the diagonal. Returns false when the
// stationary point falls on or below the diagonal (the diagonal element
// dominates there).
bool quadratic_case(const std::vector<LocalPoint>& pts, std::span<const double> w,
                    const std::vector<std::size_t>& real_idx, unsigned long mask, double w_total,
                    double& u, double& v) {
    double A = 0.0, Sb = 0.0, Sd = 0.0, W = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) W += w[i] * pts[i].delta;
    for (std::size_t bit = 0; bit < real_idx.size(); ++bit) {
        if (!(mask >> bit & 1UL)) continue;
        const std::size_t i = real_idx[bit];
        A += w[i];
        Sb += w[i] * pts[i].b;
        Sd += w[i] * pts[i].d;
        W -= w[i] * pts[i].delta;
    }
    if (A <= 0.0) return false;
    const double t = ((Sd - Sb) - sqrt2 * W) / (sqrt2 * w_total);
    if (!(t > 0.0)) return false;
    const double mid = (Sb + Sd) / A;
    u = (mid - sqrt2 * t) / 2.0;
    v = (mid + sqrt2 * t) / 2.0;
    return v > u && std::isfinite(u) && std::isfinite(v);
}

// Derivative-free polish for exponents without a closed form. Shrinking
// 8-direction compass search; adequate because the objective is piecewise
// smooth with convex pieces.
Candidate compass_polish(const std::vector<LocalPoint>& pts, std::span<const double> w, double p,
                         double u, double v, double h0) {
    static const double dir[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                     {1, 1},  {-1, -1}, {1, -1}, {-1, 1}};
    double fu = local_objective(pts, w, p, u, v);
    double h = h0;
    const double h_min = 1e-11 * (1.0 + std::abs(u) + std::abs(v));
    while (h > h_min) {
        bool moved = false;
        for (const auto& dxy : dir) {
            const double nu = u + h * dxy[0], nv = v + h * dxy[1];
            if (!(nv > nu)) continue;
            const double fn = local_objective(pts, w, p, nu, nv);
            if (fn < fu) {
                u = nu;
                v = nv;
                fu = fn;
                moved = true;
            }
        }
        if (!moved) h *= 0.5;
    }
    return {u, v, fu};
}

}  // namespace

QuotientPoint localized_candidate(std::span<const QuotientPoint> points,
                                  std::span<const double> weights, double p) {
    if (points.empty())
        throw std::invalid_argument("localized_candidate: need at least one point");
    if (points.size() != weights.size())
        throw std::invalid_argument("localized_candidate: points/weights size mismatch");
    if (!std::isfinite(p) || !(p > 1.0))
        throw std::invalid_argument("localized_candidate: need finite p > 1");
    double w_total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("localized_candidate: weights must be positive");
        w_total += w;
    }

    const auto pts = flatten(points);
    std::vector<std::size_t> real_idx;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!pts[i].diag) real_idx.push_back(i);

    const double f_diag = diagonal_objective(pts, weights, p);
    Candidate best{0.0, 0.0, f_diag};
    bool best_is_diag = true;

    std::vector<Candidate> starts;
    const std::size_t k = real_idx.size();
    if (k > 0 && k <= 16) {
        starts.reserve(1UL << k);
        for (unsigned long mask = 1; mask < (1UL << k); ++mask) {
            double u, v;
            if (quadratic_case(pts, weights, real_idx, mask, w_total, u, v))
                starts.push_back({u, v, local_objective(pts, weights, p, u, v)});
        }
    } else if (k > 16) {
        // too many inputs for the exhaustive case split: seed from the
        // all-direct solution and every input point instead
        const unsigned long all = k >= 64 ? ~0UL : (1UL << k) - 1;
        double u, v;
        if (quadratic_case(pts, weights, real_idx, all, w_total, u, v))
            starts.push_back({u, v, local_objective(pts, weights, p, u, v)});
    }
    for (std::size_t i : real_idx)
        starts.push_back({pts[i].b, pts[i].d,
                          local_objective(pts, weights, p, pts[i].b, pts[i].d)});

    for (const auto& c : starts)
        if (c.value < best.value) {
            best = c;
            best_is_diag = false;
        }

    if (p != 2.0 && !starts.empty()) {
        // keep a handful of the most promising starts and polish each
        std::sort(starts.begin(), starts.end(),
                  [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
        double spread = 0.0;
        for (std::size_t i : real_idx)
            spread = std::max({spread, std::abs(pts[i].b - pts[real_idx[0]].b),
                               std::abs(pts[i].d - pts[real_idx[0]].d), pts[i].delta});
        const double h0 = std::max(spread * 0.25, 1e-6);
        const std::size_t tries = std::min<std::size_t>(starts.size(), 12);
        for (std::size_t s = 0; s < tries; ++s) {
            const auto polished =
                compass_polish(pts, weights, p, starts[s].u, starts[s].v, h0);
            if (polished.value < best.value) {
                best = polished;
                best_is_diag = false;
            }
        }
    }

    if (best_is_diag || best.value >= f_diag) return QuotientPoint::diagonal();
    return QuotientPoint(PlanarPoint(best.u, best.v));
}

BarycenterProblem::BarycenterProblem(std::vector<PersistenceMeasure> inputs_,
                                     std::vector<double> weights_, double p_)
    : inputs(std::move(inputs_)), weights(std::move(weights_)), p(p_) {
    if (inputs.empty()) throw std::invalid_argument("BarycenterProblem: need at least one input");
    if (weights.size() != inputs.size())
        throw std::invalid_argument("BarycenterProblem: one weight per input required");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("BarycenterProblem: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("BarycenterProblem: weights must sum to 1, got " +
                                    std::to_string(sum));
    if (!std::isfinite(p) || p <= 1.0)
        throw std::invalid_argument(
            "BarycenterProblem: need finite p > 1 (p = 1 asks for a median, not a mean)");
}

double BarycenterProblem::total_input_mass() const {
    double m = 0.0;
    for (const auto& mu : inputs) m += mu.total_mass();
    return m;
}

double frechet_energy(const PersistenceMeasure& candidate, const BarycenterProblem& problem) {
    double e = 0.0;
    for (std::size_t i = 0; i < problem.inputs.size(); ++i)
        e += problem.weights[i] * ot_cost_power(candidate, problem.inputs[i], problem.p);
    return e;
}

namespace {

struct PlanSummary {
    std::vector<AtomGrouping> groups;                 // aligned with candidate atoms
    std::vector<std::vector<GroupEntry>> unserved;    // per input: atoms covered by the diagonal
};

PlanSummary summarize_plans(const PersistenceMeasure& candidate, const BarycenterProblem& problem) {
    PlanSummary s;
    s.groups.resize(candidate.size());
    for (auto& g : s.groups) g.per_input.resize(problem.inputs.size());
    s.unserved.resize(problem.inputs.size());
    for (std::size_t i = 0; i < problem.inputs.size(); ++i) {
        if (candidate.empty()) {
            for (std::size_t j = 0; j < problem.inputs[i].size(); ++j)
                s.unserved[i].push_back({j, problem.inputs[i].atoms()[j].mass});
            continue;
        }
        const auto plan = optimal_plan(candidate, problem.inputs[i], problem.p);
        for (const auto& e : plan.edges) {
            if (e.source == diagonal_index) {
                if (e.target != diagonal_index) s.unserved[i].push_back({e.target, e.mass});
            } else {
                s.groups[e.source].per_input[i].push_back({e.target, e.mass});
            }
        }
    }
    return s;
}

// Best location for a fresh atom serving one input point, with every other
// input reached through the diagonal.
QuotientPoint solo_candidate(const BarycenterProblem& problem, std::size_t input,
                             const PlanarPoint& target) {
    double w_rest = 0.0;
    for (std::size_t l = 0; l < problem.inputs.size(); ++l)
        if (l != input) w_rest += problem.weights[l];
    if (w_rest == 0.0) return QuotientPoint(target);
    const std::vector<QuotientPoint> pts{QuotientPoint(target), QuotientPoint::diagonal()};
    const std::vector<double> w{problem.weights[input], w_rest};
    return localized_candidate(pts, w, problem.p);
}

}  // namespace

BarycenterState frechet_mean(const BarycenterProblem& problem, const PersistenceMeasure& init,
                             const FrechetOptions& options) {
    PersistenceMeasure candidate = init;
    double energy = frechet_energy(candidate, problem);
    std::vector<double> trace{energy};
    bool converged = false;
    const std::size_t n_inputs = problem.inputs.size();

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const auto summary = summarize_plans(candidate, problem);

        // localized update of every atom, and the largest real mass it
        // serves in any single input (the rest only pays diagonal fares)
        std::vector<WeightedAtom> moved_at(candidate.size(), {PlanarPoint(0.0, 1.0), 1.0});
        std::vector<bool> moved_off(candidate.size(), false);
        std::vector<double> need(candidate.size(), 0.0);
        for (std::size_t k = 0; k < candidate.size(); ++k) {
            std::vector<QuotientPoint> pts;
            std::vector<double> w;
            for (std::size_t i = 0; i < n_inputs; ++i) {
                double served = 0.0;
                for (const auto& entry : summary.groups[k].per_input[i]) {
                    if (entry.target == diagonal_index) {
                        pts.push_back(QuotientPoint::diagonal());
                    } else {
                        pts.push_back(QuotientPoint(problem.inputs[i].atoms()[entry.target].point));
                        served += entry.mass;
                    }
                    w.push_back(problem.weights[i] * entry.mass);
                }
                need[k] = std::max(need[k], served);
            }
            if (pts.empty()) {
                moved_at[k] = candidate.atoms()[k];
                moved_off[k] = true;
                need[k] = candidate.atoms()[k].mass;
                continue;
            }
            const auto y = localized_candidate(pts, w, problem.p);
            if (!y.is_diagonal()) {
                moved_at[k] = {y.point(), candidate.atoms()[k].mass};
                moved_off[k] = true;
            }
        }

        // fresh atoms for input mass the plans currently route through the
        // diagonal; together with trimming this keeps total mass within the
        // input mass budget
        std::vector<WeightedAtom> spawns;
        for (std::size_t i = 0; i < n_inputs; ++i) {
            for (const auto& entry : summary.unserved[i]) {
                const auto& target = problem.inputs[i].atoms()[entry.target].point;
                const auto y = solo_candidate(problem, i, target);
                if (!y.is_diagonal()) spawns.push_back({y.point(), entry.mass});
            }
        }

        std::vector<std::vector<WeightedAtom>> proposals;
        {
            std::vector<WeightedAtom> plain;
            for (std::size_t k = 0; k < candidate.size(); ++k)
                if (moved_off[k]) plain.push_back(moved_at[k]);
            proposals.push_back(std::move(plain));
        }
        {
            std::vector<WeightedAtom> trimmed;
            for (std::size_t k = 0; k < candidate.size(); ++k)
                if (moved_off[k] && need[k] > 0.0)
                    trimmed.push_back({moved_at[k].point, need[k]});
            trimmed.insert(trimmed.end(), spawns.begin(), spawns.end());
            proposals.push_back(std::move(trimmed));
        }
        {
            // every atom broken into one piece per matched input point
            std::vector<WeightedAtom> split;
            for (std::size_t k = 0; k < candidate.size(); ++k)
                for (std::size_t i = 0; i < n_inputs; ++i)
                    for (const auto& entry : summary.groups[k].per_input[i]) {
                        if (entry.target == diagonal_index) continue;
                        const auto& target = problem.inputs[i].atoms()[entry.target].point;
                        const auto y = solo_candidate(problem, i, target);
                        if (!y.is_diagonal()) split.push_back({y.point(), entry.mass});
                    }
            split.insert(split.end(), spawns.begin(), spawns.end());
            proposals.push_back(std::move(split));
        }
        if (candidate.size() >= 2 && candidate.size() <= 12) {
            // pairwise exchanges: two atoms trade the input points they serve
            // in one input, escaping matchings the per-input plans lock in
            auto localize_entries =
                [&](const std::vector<std::vector<GroupEntry>>& per_input) -> QuotientPoint {
                std::vector<QuotientPoint> pts;
                std::vector<double> w;
                for (std::size_t i = 0; i < n_inputs; ++i)
                    for (const auto& entry : per_input[i]) {
                        if (entry.target == diagonal_index)
                            pts.push_back(QuotientPoint::diagonal());
                        else
                            pts.push_back(QuotientPoint(problem.inputs[i].atoms()[entry.target].point));
                        w.push_back(problem.weights[i] * entry.mass);
                    }
                if (pts.empty()) return QuotientPoint::diagonal();
                return localized_candidate(pts, w, problem.p);
            };
            for (std::size_t k1 = 0; k1 + 1 < candidate.size(); ++k1) {
                for (std::size_t k2 = k1 + 1; k2 < candidate.size(); ++k2) {
                    for (std::size_t i = 0; i < n_inputs; ++i) {
                        if (summary.groups[k1].per_input[i].empty() &&
                            summary.groups[k2].per_input[i].empty())
                            continue;
                        auto swapped1 = summary.groups[k1].per_input;
                        auto swapped2 = summary.groups[k2].per_input;
                        std::swap(swapped1[i], swapped2[i]);
                        const auto y1 = localize_entries(swapped1);
                        const auto y2 = localize_entries(swapped2);
                        std::vector<WeightedAtom> traded;
                        for (std::size_t k = 0; k < candidate.size(); ++k)
                            if (k != k1 && k != k2 && moved_off[k]) traded.push_back(moved_at[k]);
                        if (!y1.is_diagonal())
                            traded.push_back({y1.point(), candidate.atoms()[k1].mass});
                        if (!y2.is_diagonal())
                            traded.push_back({y2.point(), candidate.atoms()[k2].mass});
                        proposals.push_back(std::move(traded));
                    }
                }
            }
            // pairwise fusions: two atoms replaced by the localized point of
            // their combined matched mass
            for (std::size_t k1 = 0; k1 + 1 < candidate.size(); ++k1) {
                for (std::size_t k2 = k1 + 1; k2 < candidate.size(); ++k2) {
                    std::vector<QuotientPoint> pts;
                    std::vector<double> w;
                    for (std::size_t i = 0; i < n_inputs; ++i)
                        for (std::size_t k : {k1, k2})
                            for (const auto& entry : summary.groups[k].per_input[i]) {
                                if (entry.target == diagonal_index)
                                    pts.push_back(QuotientPoint::diagonal());
                                else
                                    pts.push_back(
                                        QuotientPoint(problem.inputs[i].atoms()[entry.target].point));
                                w.push_back(problem.weights[i] * entry.mass);
                            }
                    if (pts.empty()) continue;
                    const auto y = localized_candidate(pts, w, problem.p);
                    std::vector<WeightedAtom> fused;
                    for (std::size_t k = 0; k < candidate.size(); ++k)
                        if (k != k1 && k != k2 && moved_off[k]) fused.push_back(moved_at[k]);
                    if (!y.is_diagonal())
                        fused.push_back(
                            {y.point(), candidate.atoms()[k1].mass + candidate.atoms()[k2].mass});
                    proposals.push_back(std::move(fused));
                }
            }
        }

        double best_energy = std::numeric_limits<double>::infinity();
        PersistenceMeasure best;
        for (auto& prop : proposals) {
            PersistenceMeasure meas(std::move(prop));
            const double e = frechet_energy(meas, problem);
            if (e < best_energy) {
                best_energy = e;
                best = std::move(meas);
            }
        }

        const double gain = energy - best_energy;
        if (best_energy <= energy) {
            candidate = std::move(best);
            energy = best_energy;
            trace.push_back(energy);
        }
        if (gain < options.tolerance) {
            converged = true;
            break;
        }
    }

    BarycenterState state{candidate, summarize_plans(candidate, problem).groups, energy,
                          std::move(trace), converged};
    return state;
}

BarycenterState multistart_frechet_mean(const BarycenterProblem& problem, std::mt19937_64& rng,
                                        int random_seeds, const FrechetOptions& options) {
    BarycenterState best{};
    bool have = false;
    auto consider = [&](const PersistenceMeasure& seed) {
        auto state = frechet_mean(problem, seed, options);
        if (!have || state.energy < best.energy) {
            best = std::move(state);
            have = true;
        }
    };

    for (const auto& input : problem.inputs) consider(input);

    // perturbed copies of random inputs; spread estimated from the atoms
    double spread = 0.0;
    for (const auto& mu : problem.inputs)
        for (const auto& a : mu.atoms())
            spread = std::max({spread, std::abs(a.point.birth), std::abs(a.point.death)});
    std::normal_distribution<double> jitter(0.0, 0.05 * (spread + 1.0));
    std::uniform_int_distribution<std::size_t> pick(0, problem.inputs.size() - 1);
    for (int s = 0; s < random_seeds; ++s) {
        const auto& base = problem.inputs[pick(rng)];
        std::vector<WeightedAtom> atoms;
        for (const auto& a : base.atoms()) {
            const double nb = a.point.birth + jitter(rng);
            const double nd = a.point.death + jitter(rng);
            if (nd > nb)
                atoms.push_back({PlanarPoint(nb, nd), a.mass});
            else
                atoms.push_back(a);
        }
        consider(PersistenceMeasure(std::move(atoms)));
    }
    return best;
}

namespace {

double snapped_integer(double x, const char* what) {
    const double rounded = std::round(x);
    if (std::abs(x - rounded) > 1e-7)
        throw std::runtime_error(std::string("exact_barycenter_lp: non-integral ") + what +
                                 ", mass " + std::to_string(x));
    return rounded;
}

// One or two inputs: pad each one to m unit slots with diagonal copies and
// pick one slot per input per grouping. The constraint matrix is an
// assignment polytope, so the optimal vertex has integer coordinates.
PersistenceMeasure grouping_lp_barycenter(const BarycenterProblem& problem, std::size_t m) {
    const std::size_t n_inputs = problem.inputs.size();
    std::vector<std::vector<QuotientPoint>> padded(n_inputs);
    for (std::size_t i = 0; i < n_inputs; ++i) {
        for (const auto& a : problem.inputs[i].atoms()) {
            const auto copies = static_cast<std::size_t>(std::llround(a.mass));
            for (std::size_t c = 0; c < copies; ++c) padded[i].push_back(QuotientPoint(a.point));
        }
        while (padded[i].size() < m) padded[i].push_back(QuotientPoint::diagonal());
    }

    std::size_t n_groupings = 1;
    for (std::size_t i = 0; i < n_inputs; ++i) n_groupings *= m;

    // one candidate per grouping: the localized minimizer of one slot drawn
    // from each input
    std::vector<QuotientPoint> grouping(n_inputs, QuotientPoint::diagonal());
    std::vector<QuotientPoint> z;
    z.reserve(n_groupings);
    detail::UnitColumnLp lp;
    lp.rows = n_inputs * m;
    lp.rhs.assign(lp.rows, 1.0);
    lp.cost.reserve(n_groupings);
    for (std::size_t k = 0; k < n_groupings; ++k) {
        std::size_t rest = k;
        std::vector<int> rows(n_inputs);
        for (std::size_t i = 0; i < n_inputs; ++i) {
            const std::size_t j = rest % m;
            rest /= m;
            grouping[i] = padded[i][j];
            rows[i] = static_cast<int>(i * m + j);
        }
        const auto y = localized_candidate(grouping, problem.weights, problem.p);
        double c = 0.0;
        for (std::size_t i = 0; i < n_inputs; ++i)
            c += problem.weights[i] * power(ground_distance(grouping[i], y), problem.p);
        z.push_back(y);
        lp.cost.push_back(c);
        lp.columns.push_back(std::move(rows));
    }

    const auto sol = detail::solve_unit_column_lp(lp);

    std::vector<WeightedAtom> atoms;
    for (std::size_t k = 0; k < n_groupings; ++k) {
        const double rounded = snapped_integer(sol.x[k], "vertex");
        if (rounded >= 1.0 && !z[k].is_diagonal()) atoms.push_back({z[k].point(), rounded});
    }
    return PersistenceMeasure(std::move(atoms));
}

// Three or more inputs: grouping variables alone pick up fractional vertices
// (the axial assignment polytope is not integral), so solve the coupling
// form instead. Each input keeps its own transport plan onto a shared
// candidate list and the plans are tied by equal second marginals; vertices
// of that polyhedron are integral, which keeps the output a diagram.
PersistenceMeasure coupling_lp_barycenter(const BarycenterProblem& problem, std::size_t m) {
    const std::size_t n_inputs = problem.inputs.size();

    // collapse each input into distinct atom classes plus one diagonal class
    // holding the padding slots
    std::vector<std::vector<QuotientPoint>> class_point(n_inputs);
    std::vector<std::vector<double>> class_mult(n_inputs);
    for (std::size_t i = 0; i < n_inputs; ++i) {
        for (const auto& a : problem.inputs[i].atoms()) {
            class_point[i].push_back(QuotientPoint(a.point));
            class_mult[i].push_back(std::round(a.mass));
        }
        class_point[i].push_back(QuotientPoint::diagonal());
        class_mult[i].push_back(static_cast<double>(m) - problem.inputs[i].total_mass());
    }

    // candidate list: localized minimizer of every tuple of classes
    std::size_t n_tuples = 1;
    for (std::size_t i = 0; i < n_inputs; ++i) n_tuples *= class_point[i].size();
    std::vector<QuotientPoint> z;
    z.reserve(n_tuples);
    std::vector<QuotientPoint> tuple(n_inputs, QuotientPoint::diagonal());
    for (std::size_t t = 0; t < n_tuples; ++t) {
        std::size_t rest = t;
        for (std::size_t i = 0; i < n_inputs; ++i) {
            tuple[i] = class_point[i][rest % class_point[i].size()];
            rest /= class_point[i].size();
        }
        z.push_back(localized_candidate(tuple, problem.weights, problem.p));
    }

    // rows: one per class (its multiplicity), then per input beyond the
    // first one row per candidate forcing equal marginals
    detail::SparseLp lp;
    std::vector<std::size_t> class_row(n_inputs);
    std::size_t next_row = 0;
    for (std::size_t i = 0; i < n_inputs; ++i) {
        class_row[i] = next_row;
        next_row += class_point[i].size();
    }
    const std::size_t marginal_base = next_row;
    lp.rows = marginal_base + (n_inputs - 1) * n_tuples;
    lp.rhs.assign(lp.rows, 0.0);
    for (std::size_t i = 0; i < n_inputs; ++i)
        for (std::size_t a = 0; a < class_mult[i].size(); ++a)
            lp.rhs[class_row[i] + a] = class_mult[i][a];

    for (std::size_t i = 0; i < n_inputs; ++i) {
        for (std::size_t a = 0; a < class_point[i].size(); ++a) {
            for (std::size_t t = 0; t < n_tuples; ++t) {
                std::vector<std::pair<int, double>> entries;
                entries.emplace_back(static_cast<int>(class_row[i] + a), 1.0);
                if (i == 0) {
                    for (std::size_t l = 1; l < n_inputs; ++l)
                        entries.emplace_back(
                            static_cast<int>(marginal_base + (l - 1) * n_tuples + t), 1.0);
                } else {
                    entries.emplace_back(
                        static_cast<int>(marginal_base + (i - 1) * n_tuples + t), -1.0);
                }
                lp.columns.push_back(std::move(entries));
                lp.cost.push_back(problem.weights[i] *
                                  power(ground_distance(class_point[i][a], z[t]), problem.p));
            }
        }
    }

    const auto sol = detail::solve_sparse_lp(lp);

    // the shared marginal read off the first input's plan is the barycenter;
    // input 0's variables sit first, class-major then tuple
    std::vector<double> marginal(n_tuples, 0.0);
    for (std::size_t a = 0; a < class_point[0].size(); ++a)
        for (std::size_t t = 0; t < n_tuples; ++t) marginal[t] += sol.x[a * n_tuples + t];
    std::vector<WeightedAtom> atoms;
    for (std::size_t t = 0; t < n_tuples; ++t) {
        const double rounded = snapped_integer(marginal[t], "marginal");
        if (rounded >= 1.0 && !z[t].is_diagonal()) atoms.push_back({z[t].point(), rounded});
    }
    return PersistenceMeasure(std::move(atoms));
}

}  // namespace

PersistenceMeasure exact_barycenter_lp(const BarycenterProblem& problem) {
    const std::size_t n_inputs = problem.inputs.size();

    std::size_t m = 0;
    {
        double mass_total = 0.0;
        for (const auto& mu : problem.inputs) {
            for (const auto& a : mu.atoms()) {
                const double r = std::round(a.mass);
                if (r < 1.0 || std::abs(a.mass - r) > 1e-9)
                    throw std::invalid_argument(
                        "exact_barycenter_lp: inputs must be diagrams (positive integer masses)");
            }
            mass_total += mu.total_mass();
        }
        m = static_cast<std::size_t>(std::llround(mass_total));
    }
    if (m == 0) return PersistenceMeasure{};

    double k_estimate = 1.0;
    for (std::size_t i = 0; i < n_inputs; ++i) k_estimate *= static_cast<double>(m);
    if (k_estimate > 1e5)
        throw std::invalid_argument("exact_barycenter_lp: " + std::to_string(m) + "^" +
                                    std::to_string(n_inputs) +
                                    " groupings exceed 100000; use frechet_mean instead");

    if (n_inputs <= 2) return grouping_lp_barycenter(problem, m);
    return coupling_lp_barycenter(problem, m);
}

}  // namespace pmot
