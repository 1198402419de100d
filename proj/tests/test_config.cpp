#include <gtest/gtest.h>

#include "qtoken/config.hpp"
#include "qtoken/errors.hpp"
#include "qtoken/scenario.hpp"

using namespace qtoken;

TEST(Config, UnknownKeysAndSectionsRejected) {
    Config c;
    EXPECT_THROW(c.apply_text("[cavity]\nkapa_ghz = 3\n"), ConfigError);
    EXPECT_THROW(c.apply_text("[cavities]\nkappa_ghz = 3\n"), ConfigError);
    EXPECT_THROW(c.set("cavity.nope", "1"), ConfigError);
    EXPECT_THROW(c.apply_text("kappa_ghz = 3\n"), ConfigError);
}

TEST(Config, MalformedNumbersRejected) {
    Config c;
    EXPECT_THROW(c.set("cavity.kappa_ghz", "abc"), ConfigError);
    EXPECT_THROW(c.apply_text("[cavity]\nkappa_ghz = 1.5x\n"), ConfigError);
    c.set("cavity.kappa_ghz", "-4");
    EXPECT_THROW(Scenario::from_config(c), ConfigError);
}

TEST(Config, OverridesAndHash) {
    Config a, b;
    EXPECT_EQ(a.hash(), b.hash());
    b.set("photon.bandwidth_ghz", "4.0");
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(b.number("photon", "bandwidth_ghz"), 4.0);
}

TEST(Config, PhononTablePatternKeys) {
    Config c;
    c.apply_text("[phonon]\nh_egx_0_1 = 0.5 0.1\n");
    EXPECT_EQ(c.matching("phonon", "h_").size(), 1u);
    EXPECT_THROW(c.apply_text("[phonon]\nh_zzz_0_1 = 1\n"), ConfigError);
}

TEST(Config, ReferenceFilesLoad) {
    for (const char* f : {"reference_cavity.ini", "reference_optical.ini", "reference_microwave.ini",
                          "reference_nuclear.ini", "phonon_example.ini"}) {
        const auto c = Config::load(std::string(QTOKEN_CONFIG_DIR) + "/" + f);
        EXPECT_NO_THROW(Scenario::from_config(c)) << f;
    }
}

TEST(Scenario, AngularBandwidthConvention) {
    Config c;
    c.set("photon.bandwidth_ghz", "6.283185307179586");
    c.set("photon.bandwidth_convention", "angular");
    EXPECT_NEAR(Scenario::from_config(c).spectral_fwhm(), 1.0, 1e-15);
    c.set("photon.bandwidth_convention", "ordinary");
    EXPECT_NEAR(Scenario::from_config(c).spectral_fwhm(), 6.283185307179586, 1e-15);
}

TEST(Scenario, FixedMemoryRateAtReferenceBandwidth) {
    const auto s = Scenario::from_config(Config::load(std::string(QTOKEN_CONFIG_DIR) + "/reference_optical.ini"));
    const auto e = evaluate(s);
    EXPECT_NEAR(e.f_avg, 0.987212, 2e-6);
    EXPECT_NEAR(e.rate.total_ns, 5181.43, 0.01);
}
