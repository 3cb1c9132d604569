#include "sr/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sr {

namespace {

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

// Combiner rows already carry the conjugation; applying them is a plain dot.
cplx apply_row(std::span<const cplx> row, std::span<const cplx> y) {
    cplx acc{};
    for (std::size_t i = 0; i < row.size(); ++i) acc += row[i] * y[i];
    return acc;
}

double norm2(std::span<const cplx> a) {
    double acc = 0.0;
    for (const cplx& v : a) acc += std::norm(v);
    return acc;
}

double residual2(std::span<const cplx> y, std::span<const cplx> h, cplx x, double amp) {
    double acc = 0.0;
    for (std::size_t m = 0; m < y.size(); ++m) acc += std::norm(y[m] - amp * h[m] * x);
    return acc;
}

void check_channels(const ReceivedBlock& block, std::span<const cplx> h1,
                    std::span<const cplx> h2) {
    if (block.K() < 1) throw std::invalid_argument("detector: empty block");
    if (h1.size() != h2.size() || static_cast<int>(h1.size()) != block.M_r())
        throw std::invalid_argument("detector: channel/block dimension mismatch");
}

}  // namespace

std::array<cvec, 2> linear_combiner(const StackedModel& model, LinearVariant variant,
                                    double sigma2_over_p) {
    const std::size_t m_r = model.h1.size();
    std::array<cvec, 2> rows{cvec(m_r), cvec(m_r)};
    if (variant == LinearVariant::MRC) {
        const double n1 = norm2(model.h1);
        const double n2 = norm2(model.h2);
        if (n1 == 0.0 || n2 == 0.0)
            throw std::domain_error("linear_combiner: MRC requires nonzero channels");
        for (std::size_t m = 0; m < m_r; ++m) {
            rows[0][m] = std::conj(model.h1[m]) / n1;
            rows[1][m] = std::conj(model.h2[m]) / n2;
        }
        return rows;
    }
    // Gram matrix H^H H = [a b; conj(b) d], plus the MMSE diagonal loading.
    const double reg = variant == LinearVariant::MMSE ? sigma2_over_p : 0.0;
    const double a = norm2(model.h1) + reg;
    const double d = norm2(model.h2) + reg;
    const cplx b = dot_conj(model.h1, model.h2);
    const double det = a * d - std::norm(b);
    // Hermitian PSD 2x2: eigenvalues ((a+d) +/- sqrt((a-d)^2 + 4|b|^2)) / 2.
    const double disc = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(b));
    const double lam_max = 0.5 * ((a + d) + disc);
    const double lam_min = 0.5 * ((a + d) - disc);
    if (!(lam_min > 0.0) || lam_max / lam_min > 1e12)
        throw std::domain_error("linear_combiner: H^H H is singular (ZF/MMSE undefined)");
    // (H^H H)^{-1} = [d -b; -conj(b) a] / det; rows of (H^H H)^{-1} H^H.
    for (std::size_t m = 0; m < m_r; ++m) {
        const cplx h1c = std::conj(model.h1[m]);
        const cplx h2c = std::conj(model.h2[m]);
        rows[0][m] = (d * h1c - b * h2c) / det;
        rows[1][m] = (-std::conj(b) * h1c + a * h2c) / det;
    }
    return rows;
}

DetectionResult detect_ml(const ReceivedBlock& block, std::span<const cplx> h1,
                          std::span<const cplx> h2, double p, const Constellation& A_s,
                          const Constellation& A_c) {
    check_channels(block, h1, h2);
    const int K = block.K();
    const std::size_t m_r = h1.size();
    const double amp = std::sqrt(p);

    DetectionResult best;
    best.metric = std::numeric_limits<double>::infinity();
    cvec h_eff(m_r);
    std::vector<cplx> s_cand(static_cast<std::size_t>(K));
    for (const cplx& c : A_c.points) {
        for (std::size_t m = 0; m < m_r; ++m) h_eff[m] = h1[m] + h2[m] * c;
        const double he_norm2 = norm2(h_eff);
        if (he_norm2 == 0.0)
            throw std::domain_error("detect_ml: h1 + h2*c is zero, decision undefined");
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
            const auto& y = block.samples[static_cast<std::size_t>(k)];
            // Spatial MRC conditioned on c, then nearest-symbol decision.
            const cplx u = dot_conj(h_eff, y) / (amp * he_norm2);
            const int idx = A_s.nearest(u);
            const cplx s = A_s.points[static_cast<std::size_t>(idx)];
            s_cand[static_cast<std::size_t>(k)] = s;
            total += residual2(y, h_eff, s, amp);
        }
        if (total < best.metric) {
            best.metric = total;
            best.c_hat = c;
            best.s_hat = s_cand;
        }
    }
    return best;
}

DetectionResult detect_linear(const ReceivedBlock& block, std::span<const cplx> h1,
                              std::span<const cplx> h2, double p, double sigma2,
                              LinearVariant variant, const Constellation& A_s,
                              const Constellation& A_c, bool squared_secondary) {
    check_channels(block, h1, h2);
    const int K = block.K();
    const double amp = std::sqrt(p);
    StackedModel model{cvec(h1.begin(), h1.end()), cvec(h2.begin(), h2.end())};
    const auto rows = linear_combiner(model, variant, sigma2 / p);

    DetectionResult result;
    result.s_hat.resize(static_cast<std::size_t>(K));
    std::vector<cplx> ratio(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const auto& y = block.samples[static_cast<std::size_t>(k)];
        const cplx x1 = apply_row(rows[0], y) / amp;
        const cplx x2 = apply_row(rows[1], y) / amp;
        const cplx s = A_s.points[static_cast<std::size_t>(A_s.nearest(x1))];
        if (s == cplx{}) throw std::domain_error("detect_linear: zero symbol decision");
        result.s_hat[static_cast<std::size_t>(k)] = s;
        ratio[static_cast<std::size_t>(k)] = x2 / s;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& c : A_c.points) {
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            const double d = std::abs(c - ratio[static_cast<std::size_t>(k)]);
            acc += squared_secondary ? d * d : d;
        }
        if (acc < best) {
            best = acc;
            result.c_hat = c;
        }
    }
    result.metric = best;
    return result;
}

DetectionResult detect_sic(const ReceivedBlock& block, std::span<const cplx> h1,
                           std::span<const cplx> h2, double p, double sigma2,
                           const Constellation& A_s, const Constellation& A_c,
                           LinearVariant first_stage) {
    check_channels(block, h1, h2);
    const int K = block.K();
    const std::size_t m_r = h1.size();
    const double amp = std::sqrt(p);

    // Stage 1: linear estimate of the primary symbols.
    const DetectionResult stage1 =
        detect_linear(block, h1, h2, p, sigma2, first_stage, A_s, A_c);

    // Stage 2: subtract the direct-link contribution and match the residual
    // against sqrt(p) h2 s_hat_k c over the secondary alphabet.
    std::vector<cvec> resid(static_cast<std::size_t>(K), cvec(m_r));
    for (int k = 0; k < K; ++k) {
        const auto& y = block.samples[static_cast<std::size_t>(k)];
        const cplx s = stage1.s_hat[static_cast<std::size_t>(k)];
        for (std::size_t m = 0; m < m_r; ++m) resid[static_cast<std::size_t>(k)][m] = y[m] - amp * h1[m] * s;
    }
    DetectionResult result;
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& c : A_c.points) {
        double acc = 0.0;
        for (int k = 0; k < K; ++k) {
            const cplx s = stage1.s_hat[static_cast<std::size_t>(k)];
            acc += residual2(resid[static_cast<std::size_t>(k)], h2, s * c, amp);
        }
        if (acc < best) {
            best = acc;
            result.c_hat = c;
        }
    }

    // Stage 3: re-estimate s with c_hat folded into the channel.
    cvec h_eff(m_r);
    for (std::size_t m = 0; m < m_r; ++m) h_eff[m] = h1[m] + h2[m] * result.c_hat;
    const double he_norm2 = norm2(h_eff);
    if (he_norm2 == 0.0) throw std::domain_error("detect_sic: degenerate effective channel");
    result.s_hat.resize(static_cast<std::size_t>(K));
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        const auto& y = block.samples[static_cast<std::size_t>(k)];
        const cplx u = dot_conj(h_eff, y) / (amp * he_norm2);
        const cplx s = A_s.points[static_cast<std::size_t>(A_s.nearest(u))];
        result.s_hat[static_cast<std::size_t>(k)] = s;
        total += residual2(y, h_eff, s, amp);
    }
    result.metric = total;
    return result;
}

}  // namespace sr
