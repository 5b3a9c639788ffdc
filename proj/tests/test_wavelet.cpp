#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "evfocus/wavelet.hpp"
#include "reference_vectors.hpp"

namespace {

using namespace evfocus;

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    std::uint64_t s = seed;
    for (auto& x : v) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        x = static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    return v;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

double rms(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double sab = 0, sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        sa += (a[i] - ma) * (a[i] - ma);
        sb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(sa * sb);
}

TEST(FilterBank, BuiltinsConstructAndPassPrCheck) {
    EXPECT_EQ(WaveletFilterPair::builtin("dmey").length(), 62u);
    EXPECT_EQ(WaveletFilterPair::builtin("db4").length(), 8u);
    EXPECT_THROW(WaveletFilterPair::builtin("haar9"), std::invalid_argument);
}

TEST(FilterBank, ConstructionRejectsBrokenTaps) {
    auto bank = WaveletFilterPair::builtin("db4");
    auto lo_d = bank.lo_d;
    lo_d[3] += 1e-4;  // break orthogonality well past the 1e-10 gate
    EXPECT_THROW(
        WaveletFilterPair::from_taps("broken", lo_d, bank.hi_d, bank.lo_r, bank.hi_r),
        std::runtime_error);
}

TEST(FilterBank, EmbeddedTableMatchesDataFile) {
    std::ifstream in(EVFOCUS_DATA_DIR "/wavelets.taps", std::ios::binary);
    ASSERT_TRUE(in) << "data file missing";
    std::stringstream ss;
    ss << in.rdbuf();
    std::string embedded = evfocus::detail::kWaveletTapsText;
    if (!embedded.empty() && embedded.front() == '\n') embedded.erase(0, 1);
    EXPECT_EQ(ss.str(), embedded);
}

TEST(MaxLevels, KnownValues) {
    EXPECT_EQ(max_levels(300, 62), 2);
    EXPECT_EQ(max_levels(243, 62), 1);
    EXPECT_EQ(max_levels(4096, 62), 6);
    EXPECT_EQ(max_levels(300, 8), 5);
    EXPECT_EQ(max_levels(64, 62), 1);   // floored at 1 even when infeasible
    EXPECT_EQ(max_levels(4, 8), 1);
}

TEST(Dwt, ConstantSignalHasVanishingDetails) {
    const std::vector<double> c(128, 3.25);
    for (const char* name : {"dmey", "db4"}) {
        DenoiseSpec spec{WaveletFilterPair::builtin(name), 3};
        const auto pyr = dwt_multilevel(c, spec);
        for (const auto& d : pyr.details)
            for (double v : d) EXPECT_LE(std::abs(v), 1e-9) << name;
    }
}

TEST(Dwt, ConstantSignalSurvivesLowpass) {
    const std::vector<double> c(128, 3.25);
    DenoiseSpec spec{WaveletFilterPair::builtin("dmey"), 6};
    const auto y = lowpass_reconstruct(c, spec);
    for (double v : y) EXPECT_NEAR(v, 3.25, 1e-8);
}

TEST(Dwt, ImpulsePerfectReconstruction) {
    std::vector<double> x(64, 0.0);
    x[31] = 1.0;
    for (const char* name : {"dmey", "db4"}) {
        DenoiseSpec spec{WaveletFilterPair::builtin(name), 1};
        const auto pyr = dwt_multilevel(x, spec);
        const auto xr = inverse(pyr, spec.filter);
        for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(xr[i], x[i], 1e-8) << name;
    }
}

TEST(Dwt, PerfectReconstructionRandomLengths) {
    for (std::size_t n : {64u, 65u, 100u, 243u, 301u, 1024u, 4096u}) {
        const auto x = random_signal(n, 1000 + n);
        for (const char* name : {"dmey", "db4"}) {
            DenoiseSpec spec{WaveletFilterPair::builtin(name), 6};
            const auto xr = inverse(dwt_multilevel(x, spec), spec.filter);
            EXPECT_LE(rel_l2(xr, x), 1e-8) << name << " n=" << n;
        }
    }
}

TEST(Dwt, RejectsDegenerateInput) {
    DenoiseSpec spec{WaveletFilterPair::builtin("db4"), 6};
    EXPECT_THROW(dwt_multilevel({1.0}, spec), std::invalid_argument);
    DenoiseSpec bad{WaveletFilterPair::builtin("db4"), 0};
    EXPECT_THROW(dwt_multilevel({1.0, 2.0}, bad), std::invalid_argument);
}

TEST(Dwt, LevelClampingIsFlagged) {
    const auto x = random_signal(64, 5);
    DenoiseSpec spec{WaveletFilterPair::builtin("dmey"), 6};
    const auto pyr = dwt_multilevel(x, spec);
    EXPECT_EQ(pyr.effective_levels, 1);
    EXPECT_TRUE(pyr.clamped);

    const auto x2 = random_signal(4096, 6);
    const auto pyr2 = dwt_multilevel(x2, spec);
    EXPECT_EQ(pyr2.effective_levels, 6);
    EXPECT_FALSE(pyr2.clamped);
}

// Frozen-vector agreement with the independent reference implementation.

TEST(Oracle, Db4ThreeLevelPyramid) {
    const std::vector<double> x(refvec::x64, refvec::x64 + refvec::x64_len);
    DenoiseSpec spec{WaveletFilterPair::builtin("db4"), 3};
    const auto pyr = dwt_multilevel(x, spec);
    ASSERT_EQ(pyr.effective_levels, 3);
    ASSERT_EQ(pyr.approx.size(), refvec::x64_db4_l3_ca_len);
    for (std::size_t i = 0; i < pyr.approx.size(); ++i)
        EXPECT_NEAR(pyr.approx[i], refvec::x64_db4_l3_ca[i], 1e-12);
    const double* expected[] = {refvec::x64_db4_l3_cd3, refvec::x64_db4_l3_cd2,
                                refvec::x64_db4_l3_cd1};
    const std::size_t lens[] = {refvec::x64_db4_l3_cd3_len, refvec::x64_db4_l3_cd2_len,
                                refvec::x64_db4_l3_cd1_len};
    ASSERT_EQ(pyr.details.size(), 3u);
    for (int lv = 0; lv < 3; ++lv) {
        ASSERT_EQ(pyr.details[lv].size(), lens[lv]);
        for (std::size_t i = 0; i < lens[lv]; ++i)
            EXPECT_NEAR(pyr.details[lv][i], expected[lv][i], 1e-12) << "level " << lv;
    }
}

TEST(Oracle, DmeySingleLevelPyramidAndLowpass) {
    const std::vector<double> x(refvec::x64, refvec::x64 + refvec::x64_len);
    DenoiseSpec spec{WaveletFilterPair::builtin("dmey"), 6};  // clamps to 1
    const auto pyr = dwt_multilevel(x, spec);
    ASSERT_EQ(pyr.approx.size(), refvec::x64_dmey_l1_ca_len);
    for (std::size_t i = 0; i < pyr.approx.size(); ++i)
        EXPECT_NEAR(pyr.approx[i], refvec::x64_dmey_l1_ca[i], 1e-12);
    for (std::size_t i = 0; i < pyr.details[0].size(); ++i)
        EXPECT_NEAR(pyr.details[0][i], refvec::x64_dmey_l1_cd[i], 1e-12);

    const auto y = lowpass_reconstruct(x, spec);
    for (std::size_t i = 0; i < y.size(); ++i)
        EXPECT_NEAR(y[i], refvec::x64_dmey_lowpass[i], 1e-12);
}

std::vector<double> mixture300() {
    std::vector<double> x(300);
    for (int i = 0; i < 300; ++i) {
        const double t = i / 1000.0;
        x[i] = std::exp(-(t - 0.15) * (t - 0.15) / (2 * 0.08 * 0.08)) +
               0.05 * std::sin(2.0 * M_PI * 40.0 * t);
    }
    return x;
}

TEST(Oracle, Mixture300LowpassAgreesWithReference) {
    const auto x = mixture300();
    {
        DenoiseSpec spec{WaveletFilterPair::builtin("dmey"), 6};
        const auto y = lowpass_reconstruct(x, spec);
        std::vector<double> ref(refvec::mix300_dmey_recon,
                                refvec::mix300_dmey_recon + refvec::mix300_dmey_recon_len);
        double se = 0;
        for (std::size_t i = 0; i < y.size(); ++i) se += (y[i] - ref[i]) * (y[i] - ref[i]);
        EXPECT_LE(std::sqrt(se / y.size()), 1e-6);
    }
    {
        DenoiseSpec spec{WaveletFilterPair::builtin("db4"), 6};
        const auto y = lowpass_reconstruct(x, spec);
        std::vector<double> ref(refvec::mix300_db4_recon,
                                refvec::mix300_db4_recon + refvec::mix300_db4_recon_len);
        double se = 0;
        for (std::size_t i = 0; i < y.size(); ++i) se += (y[i] - ref[i]) * (y[i] - ref[i]);
        EXPECT_LE(std::sqrt(se / y.size()), 1e-6);
    }
}

TEST(Oracle, MixtureLowpassTracksCleanBump) {
    const auto x = mixture300();
    std::vector<double> bump(300);
    for (int i = 0; i < 300; ++i) {
        const double t = i / 1000.0;
        bump[i] = std::exp(-(t - 0.15) * (t - 0.15) / (2 * 0.08 * 0.08));
    }
    DenoiseSpec dmey{WaveletFilterPair::builtin("dmey"), 6};
    DenoiseSpec db4{WaveletFilterPair::builtin("db4"), 6};
    const double c1 = correlation(lowpass_reconstruct(x, dmey), bump);
    const double c2 = correlation(lowpass_reconstruct(x, db4), bump);
    EXPECT_GE(c1, 0.99);
    EXPECT_GE(c2, 0.99);
    EXPECT_NEAR(c1, refvec::mix300_dmey_corr, 1e-9);
    EXPECT_NEAR(c2, refvec::mix300_db4_corr, 1e-9);
}

TEST(Oracle, FortyHertzAttenuation) {
    std::vector<double> s(4096);
    for (int i = 0; i < 4096; ++i) s[i] = std::sin(2.0 * M_PI * 40.0 * (i / 1000.0));
    DenoiseSpec spec{WaveletFilterPair::builtin("dmey"), 6};
    const auto y = lowpass_reconstruct(s, spec);
    const double ratio = rms(y) / rms(s);
    EXPECT_LE(ratio, 0.05);
    EXPECT_NEAR(ratio, refvec::sine4096_dmey6_rms_ratio, 1e-9);
}

TEST(Properties, Linearity) {
    const auto x = random_signal(300, 11);
    const auto y = random_signal(300, 12);
    DenoiseSpec spec{WaveletFilterPair::builtin("dmey"), 6};
    const auto lx = lowpass_reconstruct(x, spec);
    const auto ly = lowpass_reconstruct(y, spec);
    std::vector<double> mix(300), expect(300);
    for (int i = 0; i < 300; ++i) {
        mix[i] = 2.5 * x[i] - 1.25 * y[i];
        expect[i] = 2.5 * lx[i] - 1.25 * ly[i];
    }
    EXPECT_LE(rel_l2(lowpass_reconstruct(mix, spec), expect), 1e-8);
}

TEST(Properties, LowpassEnergyDoesNotGrow) {
    for (std::size_t n : {128u, 300u, 1024u}) {
        const auto x = random_signal(n, 100 + n);
        for (const char* name : {"dmey", "db4"}) {
            DenoiseSpec spec{WaveletFilterPair::builtin(name), 6};
            const auto y = lowpass_reconstruct(x, spec);
            double ex = 0, ey = 0;
            for (std::size_t i = 0; i < n; ++i) {
                ex += x[i] * x[i];
                ey += y[i] * y[i];
            }
            EXPECT_LE(std::sqrt(ey), std::sqrt(ex) * (1.0 + 1e-8)) << name << " n=" << n;
        }
    }
}

}  // namespace
