#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cqad/device.hpp"
#include "cqad/spectral.hpp"
#include "oracles.hpp"

using namespace cqad;

namespace {

AcousticModeSet single_mode(double f, double a = 0.5) {
    return AcousticModeSet({{1, ModeKind::longitudinal, f, 2e5, a, std::nullopt}}, 0.0, f, 50e6, 1.782e5);
}

void expect_orthonormal(const EigenSystem& es, double tol) {
    const auto n = es.eigenvectors.rows();
    const Eigen::MatrixXd gram = es.eigenvectors.transpose() * es.eigenvectors;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), tol);
}

} // namespace

TEST(CouplingStrength, StrongModesFourAndEight) {
    const CouplingParams c{6.5e6, -0.1, 0.35, 2};
    EXPECT_NEAR(std::abs(coupling_strength(4, ModeKind::longitudinal, c)), 6.468e6, 1e3);
    EXPECT_NEAR(std::abs(coupling_strength(8, ModeKind::longitudinal, c)), 6.468e6, 1e3);
}

TEST(CouplingStrength, ModeSixBarelyCoupled) {
    const CouplingParams c{6.5e6, -0.1, 0.35, 2};
    EXPECT_NEAR(std::abs(coupling_strength(6, ModeKind::longitudinal, c)), 0.649e6, 1e3);
}

TEST(CouplingStrength, NodeGivesZero) {
    const CouplingParams c{6.5e6, 0.0, 0.35, 0};
    EXPECT_NEAR(coupling_strength(8, ModeKind::longitudinal, c), 0.0, 1e-6);
}

TEST(CouplingStrength, TransverseScaledWithSignKept) {
    const CouplingParams c{6.5e6, -0.1, 0.35, 2};
    const double gl = coupling_strength(4, ModeKind::longitudinal, c);
    EXPECT_LT(gl, 0.0);
    EXPECT_DOUBLE_EQ(coupling_strength(4, ModeKind::transverse, c), 0.35 * gl);
}

TEST(BuildInteraction, DefaultDeviceIsEighteenSquare) {
    const Device d = default_device();
    const auto h = build_interaction(d.modes, d.coupling, 4.26e9);
    EXPECT_EQ(h.dimension(), 18u);
    const Eigen::MatrixXd m = h.dense();
    EXPECT_EQ(m.rows(), 18);
    for (int i = 0; i < 17; ++i)
        for (int j = 0; j < 17; ++j)
            if (i != j) EXPECT_EQ(m(i, j), 0.0);
    EXPECT_EQ(m(17, 17), 4.26e9);
}

TEST(BuildInteraction, SingleModeTwoByTwo) {
    const auto h = build_interaction(single_mode(4.253e9), CouplingParams{6.5e6, kPi / 4, 0.35, 0}, 4.25e9);
    const Eigen::MatrixXd m = h.dense();
    ASSERT_EQ(m.rows(), 2);
    const double g = 6.5e6 * std::sin(kPi / 4 + kPi / 4);
    EXPECT_DOUBLE_EQ(m(0, 0), 4.253e9);
    EXPECT_DOUBLE_EQ(m(1, 1), 4.25e9);
    EXPECT_DOUBLE_EQ(m(0, 1), g);
    EXPECT_DOUBLE_EQ(m(1, 0), g);
}

TEST(BuildInteraction, EmptyModeSetRejected) {
    EXPECT_THROW(build_interaction(AcousticModeSet{}, CouplingParams{}, 4e9), ValidationError);
}

TEST(Diagonalize, ResonantPairSplitsByTwoG) {
    InteractionMatrix h{{4.253e9, 4.253e9}, {6.5e6}};
    const EigenSystem es = diagonalize(h);
    EXPECT_NEAR(es.eigenvalues[0], 4.2465e9, 1.0);
    EXPECT_NEAR(es.eigenvalues[1], 4.2595e9, 1.0);
    EXPECT_NEAR((es.eigenvalues[1] - es.eigenvalues[0]) / 13e6, 1.0, 1e-9);
    EXPECT_NEAR(es.qubit_participation[0], 0.5, 1e-12);
}

TEST(Diagonalize, DiagonalInputGivesIdentityVectors) {
    InteractionMatrix h{{4.1e9, 4.3e9, 4.2e9}, {0.0, 0.0}};
    const EigenSystem es = diagonalize(h);
    EXPECT_EQ(es.eigenvalues, (std::vector<double>{4.1e9, 4.2e9, 4.3e9}));
    EXPECT_EQ(es.eigenvectors(0, 0), 1.0);
    EXPECT_EQ(es.eigenvectors(2, 1), 1.0);
    EXPECT_EQ(es.eigenvectors(1, 2), 1.0);
}

TEST(Diagonalize, RejectsAsymmetric) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 2.0, 2.5, 1.0;
    EXPECT_THROW(diagonalize(m), ValidationError);
}

TEST(Diagonalize, SignConvention) {
    const Device d = default_device();
    const EigenSystem es = diagonalize(build_interaction(d.modes, d.coupling, 4.2597e9));
    for (Eigen::Index k = 0; k < es.eigenvectors.cols(); ++k) {
        Eigen::Index imax = 0;
        es.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
        EXPECT_GT(es.eigenvectors(imax, k), 0.0);
    }
}

// Eigenvalues of small arrowhead matrices against bisection on the
// characteristic polynomial.
TEST(DiagonalizeProperty, MatchesCharacteristicPolynomialRoots) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> freq(4.2e9, 4.3e9), coup(0.2e6, 15e6), sign(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int modes = 1 + trial % 3;
        std::vector<double> w, g;
        for (int k = 0; k < modes; ++k) {
            w.push_back(freq(rng));
            g.push_back(coup(rng) * (sign(rng) < 0 ? -1.0 : 1.0));
        }
        const double wq = freq(rng);
        InteractionMatrix h{w, g};
        h.diagonal.push_back(wq);
        const EigenSystem es = diagonalize(h);
        const auto roots = oracle::arrowhead_eigenvalues(w, wq, g);
        ASSERT_EQ(roots.size(), es.eigenvalues.size());
        for (std::size_t k = 0; k < roots.size(); ++k) EXPECT_NEAR(es.eigenvalues[k] / roots[k], 1.0, 1e-9);
    }
}

TEST(DiagonalizeProperty, InterlacingOrthonormalityAndResiduals) {
    const Device d = default_device();
    std::vector<double> bare;
    for (const auto& m : d.modes.modes()) bare.push_back(m.frequency);
    for (double wq = 4.22e9; wq < 4.29e9; wq += 0.37e6) {
        const auto h = build_interaction(d.modes, d.coupling, wq);
        const EigenSystem es = diagonalize(h);
        // Cauchy interlacing: lambda_k <= bare_k <= lambda_{k+1}
        for (std::size_t k = 0; k < bare.size(); ++k) {
            EXPECT_LE(es.eigenvalues[k], bare[k]);
            EXPECT_GE(es.eigenvalues[k + 1], bare[k]);
        }
        expect_orthonormal(es, 1e-10);
        const Eigen::MatrixXd hm = h.dense();
        const double hnorm = hm.norm();
        for (std::size_t k = 0; k < es.dimension(); ++k) {
            const Eigen::VectorXd v = es.eigenvectors.col(static_cast<Eigen::Index>(k));
            EXPECT_LE((hm * v - es.eigenvalues[k] * v).norm(), 1e-9 * hnorm);
            EXPECT_NEAR(v.squaredNorm(), 1.0, 1e-10);
        }
        for (Eigen::Index i = 0; i < es.eigenvectors.rows(); ++i)
            EXPECT_NEAR(es.eigenvectors.row(i).squaredNorm(), 1.0, 1e-10);
    }
}

// Qubit midway between modes 7 and 8: one eigenmode is shared almost
// equally by 7, 7t and 8 while no eigenmode near the qubit is qubit-like.
TEST(Participation, TripleHybridizationKeepsQubitShareSmall) {
    const Device d = default_device();
    const std::size_t i7 = *d.modes.find(7, ModeKind::longitudinal), i8 = *d.modes.find(8, ModeKind::longitudinal),
                      i7t = *d.modes.find(7, ModeKind::transverse);
    const double wq = 0.5 * (d.modes[i7].frequency + d.modes[i8].frequency);
    const EigenSystem es = diagonalize(build_interaction(d.modes, d.coupling, wq));
    std::vector<std::size_t> order(es.dimension());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return std::abs(es.eigenvalues[a] - wq) < std::abs(es.eigenvalues[b] - wq);
    });
    // The most evenly shared of the three nearest eigenmodes.
    double balance = 0.0;
    std::size_t kb = 0;
    for (int n = 0; n < 3; ++n) {
        const std::size_t k = order[n];
        EXPECT_LT(es.qubit_participation[k], 0.07);
        const double m = std::min({es.participation(i7, k), es.participation(i8, k), es.participation(i7t, k)});
        if (m > balance) balance = m, kb = k;
    }
    EXPECT_GT(balance, 0.15);
    EXPECT_GT(es.participation(i7, kb) + es.participation(i8, kb) + es.participation(i7t, kb), 0.8);
}

TEST(HybridizedRates, ZeroCouplingReturnsBareRates) {
    Device d = default_device();
    d.coupling.g0 = 0.0;
    const EigenSystem es = diagonalize(build_interaction(d.modes, d.coupling, 4.6e9));
    const auto rates = hybridized_rates(es, d.modes, d.modes.kappa0(), 1.1e6);
    for (std::size_t i = 0; i < d.modes.size(); ++i) {
        EXPECT_NEAR(rates[i].kappa_ex, d.modes.kappa_external(i), 1e-9);
        EXPECT_NEAR(rates[i].kappa_in, d.modes[i].kappa_internal, 1e-9);
    }
    EXPECT_NEAR(rates.back().kappa_in, 1.1e6, 1e-6);
    EXPECT_EQ(rates.back().kappa_ex, 0.0);
}

TEST(HybridizedRates, BrightAndDarkFiftyFifty) {
    const double a = 0.6, k0 = 1.782e5;
    AcousticModeSet modes({{1, ModeKind::longitudinal, 4.25e9, 2e5, a, std::nullopt},
                           {2, ModeKind::longitudinal, 4.2548e9, 2e5, a, std::nullopt}},
                          0.0, 4.25e9, 50e6, k0);
    EigenSystem es;
    es.eigenvalues = {4.25e9, 4.2548e9, 4.6e9};
    es.eigenvectors = Eigen::MatrixXd::Zero(3, 3);
    const double r = 1.0 / std::sqrt(2.0);
    es.eigenvectors.col(0) << r, -r, 0.0;
    es.eigenvectors.col(1) << r, r, 0.0;
    es.eigenvectors(2, 2) = 1.0;
    es.qubit_participation = {0.0, 0.0, 1.0};
    const auto rates = hybridized_rates(es, modes, k0, 1e6);
    EXPECT_NEAR(rates[0].kappa_ex, 0.0, 1e-9);
    EXPECT_NEAR(rates[1].kappa_ex, 2.0 * k0 * a * a, 1e-6);
}

TEST(HybridizedRates, DegeneratePairCoupledEquallyHasDarkMode) {
    const double a = 0.6, k0 = 1.782e5;
    AcousticModeSet modes({{1, ModeKind::longitudinal, 4.25e9, 2e5, a, std::nullopt},
                           {2, ModeKind::longitudinal, 4.25e9 + 1e-3, 2e5, a, std::nullopt}},
                          0.0, 4.25e9, 50e6, k0);
    InteractionMatrix h{{4.25e9, 4.25e9}, {5e6, 5e6}};
    h.diagonal.push_back(4.25e9);
    const EigenSystem es = diagonalize(h);
    const auto rates = hybridized_rates(es, modes, k0, 1e6);
    int dark = 0;
    for (std::size_t k = 0; k < rates.size(); ++k)
        if (es.qubit_participation[k] < 1e-12) {
            ++dark;
            EXPECT_NEAR(rates[k].kappa_ex, 0.0, 1e-6);
        }
    EXPECT_EQ(dark, 1);
}

TEST(HybridizedRates, InternalLossIsConserved) {
    const Device d = default_device();
    double total = d.transmon.gamma_intrinsic;
    for (const auto& m : d.modes.modes()) total += m.kappa_internal;
    for (double wq = 4.22e9; wq < 4.29e9; wq += 1.3e6) {
        const EigenSystem es = diagonalize(build_interaction(d.modes, d.coupling, wq));
        const auto rates = hybridized_rates(es, d.modes, d.modes.kappa0(), d.transmon.gamma_intrinsic);
        double sum = 0.0;
        for (const auto& r : rates) {
            EXPECT_GE(r.kappa_ex, 0.0);
            EXPECT_GE(r.kappa_in, 0.0);
            sum += r.kappa_in;
        }
        EXPECT_NEAR(sum / total, 1.0, 1e-9);
    }
}

TEST(HybridizedRates, DimensionMismatch) {
    const Device d = default_device();
    InteractionMatrix h{{4.25e9, 4.26e9}, {1e6}};
    EXPECT_THROW(hybridized_rates(diagonalize(h), d.modes, 1e5, 1e6), ShapeError);
}
