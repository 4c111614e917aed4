#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mbn {

inline double mean(std::span<const double> x)
{
    if (x.empty())
        return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample standard deviation (n-1 denominator); zero for fewer than two values.
inline double stddev(std::span<const double> x)
{
    if (x.size() < 2)
        return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x)
        ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double median(std::span<const double> x)
{
    if (x.empty())
        throw std::invalid_argument("median: empty sample");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const std::size_t h = s.size() / 2;
    return s.size() % 2 ? s[h] : 0.5 * (s[h - 1] + s[h]);
}

struct RankSumResult {
    double u = 0.0;           ///< Mann-Whitney U of sample a
    double p_two_sided = 1.0;
    double p_less = 1.0;      ///< one-sided, alternative: a tends to be smaller than b
    double p_greater = 1.0;   ///< one-sided, alternative: a tends to be larger than b
    bool exact = false;
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace detail

/// Wilcoxon-Mann-Whitney rank-sum test with mid-ranks for ties.
///
/// Exact permutation distribution (ties included) when the smaller sample has
/// fewer than 20 values and the pooled sample at most 400; otherwise the
/// normal approximation with tie and continuity corrections.
inline RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("rank_sum_test: both samples must be non-empty");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;

    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double v : a)
        pooled.emplace_back(v, 0);
    for (double v : b)
        pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    // doubled mid-ranks are integers
    std::vector<long long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first)
            ++j;
        const long long r2 = static_cast<long long>(i + 1 + j); // (i+1 + j) = 2 * midrank
        for (std::size_t t = i; t < j; ++t)
            rank2[t] = r2;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    long long ra2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (pooled[i].second == 0)
            ra2 += rank2[i];

    RankSumResult res;
    res.u = static_cast<double>(ra2) / 2.0 - static_cast<double>(na * (na + 1)) / 2.0;

    if (std::min(na, nb) < 20 && n <= 400) {
        // Distribution of the doubled rank sum of the smaller group.
        const bool a_small = na <= nb;
        const std::size_t m = a_small ? na : nb;
        const long long total2 = std::accumulate(rank2.begin(), rank2.end(), 0LL);
        const long long max_sum = 2LL * static_cast<long long>(n) * static_cast<long long>(m) + 1;
        std::vector<std::vector<double>> ways(m + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
        ways[0][0] = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = std::min(m, i + 1); c-- > 0;)
                for (long long s = max_sum - rank2[i]; s >= 0; --s)
                    if (ways[c][static_cast<std::size_t>(s)] != 0.0)
                        ways[c + 1][static_cast<std::size_t>(s + rank2[i])] += ways[c][static_cast<std::size_t>(s)];
        const auto& dist = ways[m];
        const double all = std::accumulate(dist.begin(), dist.end(), 0.0);
        const long long observed = a_small ? ra2 : total2 - ra2;
        double le = 0.0, ge = 0.0;
        for (long long s = 0; s <= max_sum; ++s) {
            if (s <= observed)
                le += dist[static_cast<std::size_t>(s)];
            if (s >= observed)
                ge += dist[static_cast<std::size_t>(s)];
        }
        // small-group sum <= observed  <=>  a's sum <= observed (a small) or >= (a large)
        res.p_less = (a_small ? le : ge) / all;
        res.p_greater = (a_small ? ge : le) / all;
        res.exact = true;
    } else {
        const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), dn = static_cast<double>(n);
        const double mu = dna * dnb / 2.0;
        const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
        if (var <= 0.0) {
            res.p_less = res.p_greater = 1.0;
        } else {
            const double sd = std::sqrt(var);
            res.p_less = detail::normal_cdf((res.u - mu + 0.5) / sd);
            res.p_greater = 1.0 - detail::normal_cdf((res.u - mu - 0.5) / sd);
        }
    }
    res.p_less = std::min(1.0, res.p_less);
    res.p_greater = std::min(1.0, res.p_greater);
    res.p_two_sided = std::min(1.0, 2.0 * std::min(res.p_less, res.p_greater));
    return res;
}

} // namespace mbn
