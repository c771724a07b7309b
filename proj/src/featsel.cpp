#include "qkb/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qkb/errors.hpp"
#include "qkb/rng.hpp"

namespace qkb::featsel {

double QuboInstance::energy(std::span<const int> x) const {
    if (x.size() != static_cast<std::size_t>(n_vars))
        throw ArgumentError("qubo energy: assignment length mismatch");
    double e = 0.0;
    for (int i = 0; i < n_vars; ++i) {
        if (!x[i])
            continue;
        e -= alpha * linear[i];
        for (int j = i + 1; j < n_vars; ++j)
            if (x[j])
                e += (1.0 - alpha) * quadratic.at(i, j);
    }
    return e;
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0)
        return 0.0; // constant column
    return sab / std::sqrt(saa * sbb);
}

std::vector<int> chosen_from_bits(std::uint32_t bits, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (bits & (std::uint32_t{1} << i))
            out.push_back(i);
    return out;
}

/// true if set a is lexicographically smaller than set b (both sorted).
bool lex_smaller(const std::vector<int> &a, const std::vector<int> &b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct AnnealOutcome {
    std::vector<int> best_x;
    double best_energy;
};

AnnealOutcome anneal_once(const QuboInstance &q, int sweeps, std::uint64_t seed) {
    const int n = q.n_vars;
    rng::Engine eng(seed);
    std::vector<int> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = eng.uniform() < 0.5 ? 0 : 1;

    // local fields: h_i = sum_{j != i} quad_ij x_j (kept incrementally)
    std::vector<double> field(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && x[j])
                field[i] += q.quadratic.at(i, j);

    auto flip_delta = [&](int i) {
        const double on = -q.alpha * q.linear[i] + (1.0 - q.alpha) * field[i];
        return x[i] ? -on : on;
    };

    double energy = q.energy(x);
    std::vector<int> best_x = x;
    double best_energy = energy;

    // initial temperature from the largest possible single-flip move
    double t0 = 1e-3;
    for (int i = 0; i < n; ++i) {
        double reach = q.alpha * std::abs(q.linear[i]);
        for (int j = 0; j < n; ++j)
            if (j != i)
                reach += (1.0 - q.alpha) * std::abs(q.quadratic.at(i, j));
        t0 = std::max(t0, reach);
    }
    const double t_end = 1e-3 * t0;
    const double cooling = sweeps > 1 ? std::pow(t_end / t0, 1.0 / (sweeps - 1)) : 1.0;

    double temp = t0;
    for (int sweep = 0; sweep < sweeps; ++sweep, temp *= cooling) {
        for (int i = 0; i < n; ++i) {
            const double de = flip_delta(i);
            if (de <= 0.0 || eng.uniform() < std::exp(-de / temp)) {
                const double sign = x[i] ? -1.0 : 1.0;
                x[i] ^= 1;
                energy += de;
                for (int j = 0; j < n; ++j)
                    if (j != i)
                        field[j] += sign * q.quadratic.at(i, j);
                if (energy < best_energy) {
                    best_energy = energy;
                    best_x = x;
                }
            }
        }
    }
    return {std::move(best_x), best_energy};
}

std::vector<int> chosen_from_assignment(std::span<const int> x) {
    std::vector<int> out;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i])
            out.push_back(static_cast<int>(i));
    return out;
}

SelectionResult merge_restarts(const QuboInstance &q, std::vector<AnnealOutcome> outcomes) {
    std::size_t best = 0;
    std::vector<int> best_set = chosen_from_assignment(outcomes[0].best_x);
    for (std::size_t r = 1; r < outcomes.size(); ++r) {
        std::vector<int> set_r = chosen_from_assignment(outcomes[r].best_x);
        const double e_best = outcomes[best].best_energy;
        const double e_r = outcomes[r].best_energy;
        if (e_r < e_best || (e_r == e_best && lex_smaller(set_r, best_set))) {
            best = r;
            best_set = std::move(set_r);
        }
    }
    SelectionResult res;
    res.chosen = std::move(best_set);
    res.alpha = q.alpha;
    res.energy = outcomes[best].best_energy;
    res.solver = SolverKind::Annealing;
    return res;
}

void check_anneal_args(const QuboInstance &q, const AnnealSettings &s) {
    if (q.n_vars < 1)
        throw ArgumentError("solve_annealing: empty instance");
    if (s.sweeps < 1 || s.restarts < 1)
        throw ArgumentError("solve_annealing: sweeps and restarts must be >= 1");
}

} // namespace

QuboInstance build_qubo(const Matrix &features, const std::vector<int> &target, double alpha) {
    if (features.rows < 2)
        throw ArgumentError("build_qubo: need at least 2 rows");
    if (target.size() != features.rows)
        throw ArgumentError("build_qubo: target length does not match row count");
    if (alpha < 0.0 || alpha > 1.0)
        throw ArgumentError("build_qubo: alpha must lie in [0,1]");
    for (int v : target)
        if (v != 0 && v != 1)
            throw ArgumentError("build_qubo: target values must be 0/1");

    const int n = static_cast<int>(features.cols);
    std::vector<double> tgt(target.begin(), target.end());
    std::vector<std::vector<double>> cols(n);
    for (int c = 0; c < n; ++c) {
        cols[c].resize(features.rows);
        for (std::size_t r = 0; r < features.rows; ++r)
            cols[c][r] = features.at(r, c);
    }

    QuboInstance q;
    q.n_vars = n;
    q.alpha = alpha;
    q.linear.resize(n);
    q.quadratic = Matrix(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        q.linear[i] = std::abs(pearson(cols[i], tgt));
        for (int j = i + 1; j < n; ++j) {
            const double r = std::abs(pearson(cols[i], cols[j]));
            q.quadratic.at(i, j) = r;
            q.quadratic.at(j, i) = r;
        }
    }
    return q;
}

SelectionResult solve_exhaustive(const QuboInstance &q) {
    if (q.n_vars < 1)
        throw ArgumentError("solve_exhaustive: empty instance");
    if (q.n_vars > 20)
        throw ArgumentError("solve_exhaustive: refusing n_vars > 20 (2^n enumeration)");
    const int n = q.n_vars;
    const std::uint32_t count = std::uint32_t{1} << n;

    // Gray-code walk: one bit flips per step, energy updated incrementally.
    std::vector<int> x(n, 0);
    std::vector<double> field(n, 0.0);
    double energy = 0.0;
    double best_energy = 0.0;
    std::uint32_t best_bits = 0;

    std::uint32_t gray = 0;
    for (std::uint32_t step = 1; step < count; ++step) {
        const std::uint32_t next_gray = step ^ (step >> 1);
        const std::uint32_t flipped = gray ^ next_gray;
        int bit = 0;
        while (!((flipped >> bit) & 1u))
            ++bit;
        gray = next_gray;

        const double on = -q.alpha * q.linear[bit] + (1.0 - q.alpha) * field[bit];
        const double de = x[bit] ? -on : on;
        const double sign = x[bit] ? -1.0 : 1.0;
        x[bit] ^= 1;
        energy += de;
        for (int j = 0; j < n; ++j)
            if (j != bit)
                field[j] += sign * q.quadratic.at(bit, j);

        if (energy < best_energy) {
            best_energy = energy;
            best_bits = gray;
        } else if (energy == best_energy) {
            const auto cand = chosen_from_bits(gray, n);
            const auto incumbent = chosen_from_bits(best_bits, n);
            if (lex_smaller(cand, incumbent))
                best_bits = gray;
        }
    }

    SelectionResult res;
    res.chosen = chosen_from_bits(best_bits, n);
    res.alpha = q.alpha;
    res.energy = best_energy;
    res.solver = SolverKind::Exhaustive;
    return res;
}

SelectionResult solve_annealing(const QuboInstance &q, const AnnealSettings &settings) {
    check_anneal_args(q, settings);
    std::vector<AnnealOutcome> outcomes(settings.restarts);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < settings.restarts; ++r)
        outcomes[r] = anneal_once(q, settings.sweeps, rng::derive_seed(settings.seed, r));
    return merge_restarts(q, std::move(outcomes));
}

namespace serial {
SelectionResult solve_annealing(const QuboInstance &q, const AnnealSettings &settings) {
    check_anneal_args(q, settings);
    std::vector<AnnealOutcome> outcomes(settings.restarts);
    for (int r = 0; r < settings.restarts; ++r)
        outcomes[r] = anneal_once(q, settings.sweeps, rng::derive_seed(settings.seed, r));
    return merge_restarts(q, std::move(outcomes));
}
} // namespace serial

namespace {

SelectionResult solve(const QuboInstance &q, const FeatSelSettings &s) {
    if (s.solver == SolverKind::Exhaustive)
        return solve_exhaustive(q);
    return solve_annealing(q, s.anneal);
}

} // namespace

SelectionResult select_k_features(const Matrix &features, const std::vector<int> &target, int k,
                                  const FeatSelSettings &settings) {
    const int n = static_cast<int>(features.cols);
    if (k < 1 || k > n)
        throw ArgumentError("select_k_features: k must lie in [1, n_features]");

    QuboInstance q = build_qubo(features, target, 0.5);

    // selected count is nondecreasing in alpha at the optimum
    double lo = 0.0, hi = 1.0;
    SelectionResult best;
    bool have_best = false;
    for (int step = 0; step < 50; ++step) {
        const double mid = 0.5 * (lo + hi);
        q.alpha = mid;
        SelectionResult r = solve(q, settings);
        const int count = static_cast<int>(r.chosen.size());
        if (!have_best ||
            std::abs(count - k) < std::abs(static_cast<int>(best.chosen.size()) - k)) {
            best = r;
            have_best = true;
        }
        if (count == k)
            return r;
        if (count < k)
            lo = mid;
        else
            hi = mid;
    }

    // No alpha hit exactly k (heuristic nonmonotonicity or plateaus):
    // adjust the nearest result by marginal energy change.
    q.alpha = best.alpha;
    std::vector<int> in_set(n, 0);
    for (int i : best.chosen)
        in_set[i] = 1;
    auto marginal_add = [&](int cand) {
        double de = -q.alpha * q.linear[cand];
        for (int i = 0; i < n; ++i)
            if (in_set[i])
                de += (1.0 - q.alpha) * q.quadratic.at(cand, i);
        return de;
    };
    auto marginal_remove = [&](int cand) {
        double de = q.alpha * q.linear[cand];
        for (int i = 0; i < n; ++i)
            if (in_set[i] && i != cand)
                de -= (1.0 - q.alpha) * q.quadratic.at(cand, i);
        return de;
    };
    while (static_cast<int>(best.chosen.size()) > k) {
        int pick = -1;
        double pick_de = 0.0;
        for (int i : best.chosen) {
            const double de = marginal_remove(i);
            if (pick < 0 || de < pick_de) {
                pick = i;
                pick_de = de;
            }
        }
        in_set[pick] = 0;
        best.energy += pick_de;
        best.chosen.erase(std::find(best.chosen.begin(), best.chosen.end(), pick));
        best.adjusted = true;
    }
    while (static_cast<int>(best.chosen.size()) < k) {
        int pick = -1;
        double pick_de = 0.0;
        for (int i = 0; i < n; ++i) {
            if (in_set[i])
                continue;
            const double de = marginal_add(i);
            if (pick < 0 || de < pick_de) {
                pick = i;
                pick_de = de;
            }
        }
        in_set[pick] = 1;
        best.energy += pick_de;
        best.chosen.insert(std::upper_bound(best.chosen.begin(), best.chosen.end(), pick), pick);
        best.adjusted = true;
    }
    return best;
}

void write_selection_csv(const SelectionResult &r, const std::string &path) {
    std::ofstream os(path);
    if (!os)
        throw ArgumentError("write_selection_csv: cannot open '" + path + "'");
    os.precision(17);
    os << "index\n";
    for (int i : r.chosen)
        os << i << "\n";
    os << "# alpha=" << r.alpha << ",energy=" << r.energy << ",solver="
       << (r.solver == SolverKind::Exhaustive ? "exhaustive" : "annealing")
       << ",adjusted=" << (r.adjusted ? 1 : 0) << "\n";
}

std::string selection_to_json(const SelectionResult &r) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"chosen\":[";
    for (std::size_t i = 0; i < r.chosen.size(); ++i)
        os << (i ? "," : "") << r.chosen[i];
    os << "],\"alpha\":" << r.alpha << ",\"energy\":" << r.energy << ",\"solver\":\""
       << (r.solver == SolverKind::Exhaustive ? "exhaustive" : "annealing")
       << "\",\"adjusted\":" << (r.adjusted ? "true" : "false") << "}";
    return os.str();
}

} // namespace qkb::featsel
