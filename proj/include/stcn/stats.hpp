#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "stcn/dataset.hpp"

namespace stcn {

// ---------- distribution tails ----------

namespace detail {

// Regularized upper incomplete gamma Q(a, x), long double throughout so that
// chi-square tails down to ~1e-300 survive. Series expansion for x < a+1,
// Lentz continued fraction otherwise.
inline long double upper_incomplete_gamma_q(long double a, long double x) {
    if (x < 0.0L || a <= 0.0L) throw std::invalid_argument("upper_incomplete_gamma_q: bad args");
    if (x == 0.0L) return 1.0L;
    const long double lg = std::lgamma(a);
    if (x < a + 1.0L) {
        // P(a,x) series; Q = 1 - P
        long double term = 1.0L / a;
        long double sum = term;
        long double ap = a;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0L;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-30L) break;
        }
        long double p = sum * std::exp(-x + a * std::log(x) - lg);
        return std::max(0.0L, 1.0L - p);
    }
    // continued fraction for Q(a,x)
    const long double tiny = 1e-300L;
    long double b = x + 1.0L - a;
    long double c = 1.0L / tiny;
    long double d = 1.0L / b;
    long double h = d;
    for (int i = 1; i <= 500; ++i) {
        const long double an = -static_cast<long double>(i) * (static_cast<long double>(i) - a);
        b += 2.0L;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0L) < 1e-30L) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace detail

// Survival function of the chi-square distribution with df degrees of freedom.
inline double chi_square_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi_square_sf: df must be >= 1");
    if (x <= 0.0) return 1.0;
    return static_cast<double>(
        detail::upper_incomplete_gamma_q(static_cast<long double>(df) / 2.0L,
                                         static_cast<long double>(x) / 2.0L));
}

// Two-sided standard normal tail: P(|Z| >= |z|).
inline double normal_two_sided(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

// ---------- ranking ----------

// Ranks with average assignment on ties (1-based ranks).
inline Vec average_ranks(const Vec& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    Vec ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

// ---------- Friedman two-way analysis of variance by ranks ----------

struct FriedmanResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Vec mean_ranks;  // per algorithm (column)
};

// rows: one entry per dataset, each holding one value per algorithm (lower is
// better; ascending ranks).
inline FriedmanResult friedman_test(const Mat& rows) {
    if (rows.size() < 2) throw std::invalid_argument("friedman_test: need at least 2 rows");
    const std::size_t k = rows[0].size();
    if (k < 2) throw std::invalid_argument("friedman_test: need at least 2 algorithms");
    for (const auto& r : rows)
        if (r.size() != k) throw std::invalid_argument("friedman_test: ragged table");
    const double N = static_cast<double>(rows.size());
    const double kk = static_cast<double>(k);
    Vec rank_sums(k, 0.0);
    for (const auto& r : rows) {
        Vec ranks = average_ranks(r);
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    }
    FriedmanResult out;
    out.mean_ranks.resize(k);
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        out.mean_ranks[j] = rank_sums[j] / N;
        sum_sq += out.mean_ranks[j] * out.mean_ranks[j];
    }
    out.statistic =
        12.0 * N / (kk * (kk + 1.0)) * (sum_sq - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
    out.statistic = std::max(0.0, out.statistic);
    out.p_value = chi_square_sf(out.statistic, static_cast<int>(k) - 1);
    return out;
}

// ---------- Wilcoxon signed rank ----------

struct WilcoxonResult {
    double statistic = 0.0;  // min(W+, W-)
    double p_value = 1.0;    // two-sided
    std::size_t n = 0;       // pairs remaining after discarding zero differences
    bool exact = false;
};

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences are
// discarded; |differences| are ranked with average ties. Exact enumeration of
// all sign assignments for n <= 15, otherwise a tie-corrected normal
// approximation with continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
    Vec abs_d;
    std::vector<int> signs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) {
            abs_d.push_back(std::abs(d));
            signs.push_back(d > 0.0 ? 1 : -1);
        }
    }
    WilcoxonResult out;
    out.n = abs_d.size();
    if (out.n == 0) return out;  // degenerate: all differences zero, p = 1

    Vec ranks = average_ranks(abs_d);
    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < out.n; ++i)
        (signs[i] > 0 ? w_plus : w_minus) += ranks[i];
    const double w = std::min(w_plus, w_minus);
    out.statistic = w;

    const std::size_t n = out.n;
    if (n <= 15) {
        out.exact = true;
        const std::uint64_t total = 1ULL << n;
        std::uint64_t count = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) s += ranks[i];
            if (s <= w + 1e-9) ++count;
        }
        out.p_value = std::min(1.0, 2.0 * static_cast<double>(count) / static_cast<double>(total));
        return out;
    }

    const double nd = static_cast<double>(n);
    const double mu = nd * (nd + 1.0) / 4.0;
    double variance = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    // tie correction: subtract sum(t^3 - t)/48 over groups of tied |d|
    {
        Vec sorted = abs_d;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            variance -= (t * t * t - t) / 48.0;
            i = j + 1;
        }
    }
    const double sigma = std::sqrt(variance);
    if (sigma == 0.0) return out;
    const double z = (mu - w - 0.5) / sigma;  // continuity-corrected distance from the mean
    out.p_value = std::min(1.0, normal_two_sided(z));
    return out;
}

// ---------- multiple-testing corrections ----------

enum class Adjustment { bonferroni, holm, holland };

// Adjusts p-values for m simultaneous hypotheses; output order matches input.
inline std::vector<std::pair<std::string, double>> adjust_pvalues(
    const std::vector<std::pair<std::string, double>>& unadjusted, Adjustment method) {
    const std::size_t m = unadjusted.size();
    std::vector<std::pair<std::string, double>> out = unadjusted;
    if (m == 0) return out;
    const double md = static_cast<double>(m);
    if (method == Adjustment::bonferroni) {
        for (auto& [name, p] : out) p = std::min(1.0, p * md);
        return out;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return unadjusted[x].second < unadjusted[y].second;
    });
    double running = 0.0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        const double p = unadjusted[order[rank]].second;
        const double scale = md - static_cast<double>(rank);
        // at scale 1 the Holland form is exactly p; computing 1-(1-p) instead
        // loses a few ulps and can drop the adjusted value below the raw one
        const double step = method == Adjustment::holm ? scale * p
                            : scale == 1.0            ? p
                                                      : 1.0 - std::pow(1.0 - p, scale);
        running = std::max(running, step);
        out[order[rank]].second = std::min(1.0, running);
    }
    return out;
}

// ---------- pairwise significance analysis ----------

struct SignificanceRow {
    std::string algorithm;
    double p_unadjusted = 1.0;
    double p_bonferroni = 1.0;
    double p_holm = 1.0;
    double p_holland = 1.0;
};

struct SignificanceTable {
    std::string control;
    FriedmanResult friedman;
    std::vector<SignificanceRow> rows;
};

// Full pipeline: Friedman omnibus test, then per-algorithm Wilcoxon signed
// rank against the control column, with all three corrections.
inline SignificanceTable significance_analysis(const std::vector<std::string>& algorithms,
                                               const Mat& mse_rows, const std::string& control) {
    const auto it = std::find(algorithms.begin(), algorithms.end(), control);
    if (it == algorithms.end())
        throw std::invalid_argument("significance_analysis: unknown control " + control);
    const std::size_t ci = static_cast<std::size_t>(it - algorithms.begin());

    SignificanceTable table;
    table.control = control;
    table.friedman = friedman_test(mse_rows);

    Vec control_col(mse_rows.size());
    for (std::size_t r = 0; r < mse_rows.size(); ++r) control_col[r] = mse_rows[r][ci];

    std::vector<std::pair<std::string, double>> unadjusted;
    for (std::size_t j = 0; j < algorithms.size(); ++j) {
        if (j == ci) continue;
        Vec col(mse_rows.size());
        for (std::size_t r = 0; r < mse_rows.size(); ++r) col[r] = mse_rows[r][j];
        unadjusted.emplace_back(algorithms[j], wilcoxon_signed_rank(control_col, col).p_value);
    }
    auto bonf = adjust_pvalues(unadjusted, Adjustment::bonferroni);
    auto holm = adjust_pvalues(unadjusted, Adjustment::holm);
    auto holland = adjust_pvalues(unadjusted, Adjustment::holland);
    for (std::size_t r = 0; r < unadjusted.size(); ++r)
        table.rows.push_back({unadjusted[r].first, unadjusted[r].second, bonf[r].second,
                              holm[r].second, holland[r].second});
    return table;
}

}  // namespace stcn
