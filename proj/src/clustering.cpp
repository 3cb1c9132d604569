#include <algorithm>
#include <cmath>
#include <limits>

#include "sr/detectors.hpp"
#include "sr/rng.hpp"

namespace sr {

namespace {

double dist2(const cvec& a, const cvec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return acc;
}

bool lex_less(const cvec& a, const cvec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

std::size_t nearest_centroid(const cvec& x, const std::vector<cvec>& centroids) {
    std::size_t best = 0;
    double best_d = dist2(x, centroids[0]);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d = dist2(x, centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

// Lloyd's algorithm over canonically sorted samples: the rng picks the first
// seed, the rest come from deterministic farthest-point selection, so the
// result does not depend on the caller's block order.
std::vector<cvec> kmeans(std::vector<cvec> samples, std::size_t k, const ClusteringOptions& opt) {
    std::sort(samples.begin(), samples.end(), lex_less);
    const std::size_t n = samples.size();

    Rng rng(opt.seed, 0);
    std::vector<cvec> centroids;
    centroids.reserve(k);
    centroids.push_back(samples[rng.uniform_index(n)]);
    std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
    while (centroids.size() < k) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            min_d[i] = std::min(min_d[i], dist2(samples[i], centroids.back()));
            if (min_d[i] > far_d) {
                far_d = min_d[i];
                far = i;
            }
        }
        centroids.push_back(samples[far]);
    }

    std::vector<std::size_t> assign(n, 0);
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = nearest_centroid(samples[i], centroids);
            if (j != assign[i]) {
                assign[i] = j;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::vector<cvec> sums(k, cvec(samples[0].size()));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[assign[i]];
            for (std::size_t m = 0; m < samples[i].size(); ++m) sums[assign[i]][m] += samples[i][m];
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) continue;  // keep the old centroid; collapse check follows
            for (std::size_t m = 0; m < sums[j].size(); ++m)
                centroids[j][m] = sums[j][m] / static_cast<double>(counts[j]);
        }
        if (!changed) break;
    }
    return centroids;
}

}  // namespace

std::vector<cplx> detect_clustering(const std::vector<ReceivedBlock>& data,
                                    const ReceivedBlock& pilot_plus,
                                    const ReceivedBlock& pilot_minus, const Constellation& A_s,
                                    const ClusteringOptions& options) {
    if (data.size() < 64)
        throw std::invalid_argument("detect_clustering: needs >= 64 blocks to learn centroids");
    const int m_r = data.front().M_r();
    std::vector<cvec> samples;
    samples.reserve(data.size());
    for (const ReceivedBlock& b : data) {
        if (b.K() != 1) throw std::invalid_argument("detect_clustering: requires K = 1 blocks");
        if (b.M_r() != m_r) throw std::invalid_argument("detect_clustering: mixed antenna counts");
        samples.push_back(b.samples.front());
    }
    if (pilot_plus.K() != 1 || pilot_minus.K() != 1 || pilot_plus.M_r() != m_r ||
        pilot_minus.M_r() != m_r)
        throw std::invalid_argument("detect_clustering: pilot shape mismatch");

    const std::size_t k = 2 * static_cast<std::size_t>(A_s.size());
    const std::vector<cvec> centroids = kmeans(std::move(samples), k, options);

    // Collapse check: centroids must be pairwise separated relative to the
    // overall spread of the learned set.
    double spread = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) spread = std::max(spread, dist2(centroids[i], centroids[j]));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (dist2(centroids[i], centroids[j]) <= options.collapse_tolerance * spread)
                throw ClusterCollapseError(
                    "detect_clustering: fewer than 2|A_s| distinct centroids (insufficient SNR or data)");

    // Group the centroids: the +1 group is the A_s-orbit of the centroid
    // nearest the +1 pilot, since the true centroid set for a fixed c is
    // sqrt(p)(h1 + h2 c) * A_s.
    const std::size_t seed_plus = nearest_centroid(pilot_plus.samples.front(), centroids);
    const std::size_t seed_minus = nearest_centroid(pilot_minus.samples.front(), centroids);
    if (seed_plus == seed_minus)
        throw ClusterCollapseError("detect_clustering: pilots map to the same centroid");

    const cvec& mu = centroids[seed_plus];
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<bool> group_plus(k, false);
    for (const cplx& s0 : A_s.points) {
        // Predicted +1 centroid set if the pilot's latent primary symbol was s0.
        std::vector<bool> used(k, false);
        double score = 0.0;
        for (const cplx& s : A_s.points) {
            cvec q(mu.size());
            for (std::size_t m = 0; m < mu.size(); ++m) q[m] = mu[m] * (s / s0);
            std::size_t best_j = k;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < k; ++j) {
                if (used[j]) continue;
                const double d = dist2(q, centroids[j]);
                if (d < best_d) {
                    best_d = d;
                    best_j = j;
                }
            }
            used[best_j] = true;
            score += best_d;
        }
        if (score < best_score) {
            best_score = score;
            group_plus = used;
        }
    }
    if (group_plus[seed_minus])
        throw ClusterCollapseError("detect_clustering: pilot groups overlap, labeling ambiguous");

    std::vector<cplx> decisions;
    decisions.reserve(data.size());
    for (const ReceivedBlock& b : data) {
        const std::size_t j = nearest_centroid(b.samples.front(), centroids);
        decisions.emplace_back(group_plus[j] ? 1.0 : -1.0, 0.0);
    }
    return decisions;
}

}  // namespace sr
