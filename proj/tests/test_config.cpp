#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "b5gee/config.hpp"

using namespace b5gee;

namespace {

EnvLookup env_from(std::map<std::string, std::string> vars) {
    return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
        auto it = vars.find(name);
        if (it == vars.end()) {
            return std::nullopt;
        }
        return it->second;
    };
}

std::string expect_validation_key(const Config& c) {
    try {
        validate(c);
    } catch (const ValidationError& e) {
        return e.key();
    }
    return {};
}

}  // namespace

TEST(LoadConfig, EchoesGivenValues) {
    const auto c = parse_config("m_t = 256\nn_buildings = 4\npenetration_loss_db = 20\n");
    validate(c);
    EXPECT_EQ(c.scenario.m_t, 256);
    EXPECT_EQ(c.scenario.n_buildings, 4);
    EXPECT_DOUBLE_EQ(c.scenario.penetration_loss_db, 20.0);
}

TEST(LoadConfig, EmptyFileGivesDefaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c, Config{});
    EXPECT_DOUBLE_EQ(c.devices.rho, 160.0);
    EXPECT_NO_THROW(validate(c));
}

TEST(LoadConfig, EtaOutOfRangeNamesTheKey) {
    const auto c = parse_config("[overhead]\neta_c = 1.2\n");
    EXPECT_EQ(expect_validation_key(c), "overhead.eta_c");
}

TEST(LoadConfig, ValidationNamesFirstViolatedInvariant) {
    Config c;
    c.scenario.gamma = 0.0;
    EXPECT_EQ(expect_validation_key(c), "gamma");
    c = Config{};
    c.scenario.pilot_len = c.scenario.coherence_block + 1;
    EXPECT_EQ(expect_validation_key(c), "pilot_len");
    c = Config{};
    c.lifi.half_angle = pi / 2.0;
    EXPECT_EQ(expect_validation_key(c), "lifi.half_angle");
    c = Config{};
    c.lifi.normal_rx = {0.0, 0.0, 2.0};
    EXPECT_EQ(expect_validation_key(c), "lifi.normal_rx");
    c = Config{};
    c.devices.baseband.n_fft = 1000;
    EXPECT_EQ(expect_validation_key(c), "baseband.n_fft");
}

TEST(LoadConfig, ShippedDefaultFileMatchesBuiltInDefaults) {
    const auto c = load_config(B5GEE_SOURCE_DIR "/configs/default.cfg", no_env);
    EXPECT_EQ(c, Config{});
}

TEST(LoadConfig, MissingFileIsParseError) {
    EXPECT_THROW(load_config("/nonexistent/b5gee.cfg", no_env), ParseError);
}

TEST(ConfigGrammar, CommentsSectionsAndDegrees) {
    const auto c = parse_config(
        "# comment\n"
        "; another comment\n"
        "m_t = 64   # trailing\n"
        "[LiFi]\n"
        "half_angle_deg = 45\n"
        "tx_positions = 0,0,3; 1,1,3 ; 2, 2, 3\n"
        "[geometry]\n"
        "building_distances = 50, 60, 70, 80\n");
    EXPECT_EQ(c.scenario.m_t, 64);
    EXPECT_NEAR(c.lifi.half_angle, pi / 4.0, 1e-15);
    ASSERT_EQ(c.lifi.tx_positions.size(), 3u);
    EXPECT_EQ(c.lifi.tx_positions[2], (Vec3{2.0, 2.0, 3.0}));
    EXPECT_EQ(c.scenario.building_distances, (std::vector<double>{50, 60, 70, 80}));
}

TEST(ConfigGrammar, Errors) {
    EXPECT_THROW(parse_config("nonsense = 1\n"), ParseError);
    EXPECT_THROW(parse_config("m_t = 12x\n"), ParseError);
    EXPECT_THROW(parse_config("m_t = 2.5\n"), ParseError);
    EXPECT_THROW(parse_config("m_t = 1\nm_t = 2\n"), ParseError);
    EXPECT_THROW(parse_config("[mbsala\n"), ParseError);
    EXPECT_THROW(parse_config("just text\n"), ParseError);
    EXPECT_THROW(parse_config("separation = sideways\n"), ParseError);
    EXPECT_THROW(parse_config("[mbsala]\np_mod_deg = 3\n"), ParseError);  // not an angle field
    EXPECT_THROW(parse_config("[lifi]\nfov = 1\nfov_deg = 60\n"), ParseError);
}

TEST(ConfigGrammar, EnvOverridesFileOverridesDefault) {
    const std::string file = "m_t = 64\n[overhead]\neta_c = 0.2\n";
    const auto from_file = parse_config(file);
    EXPECT_EQ(from_file.scenario.m_t, 64);
    const auto c = parse_config(file, env_from({{"B5GEE_M_T", "256"},
                                                {"B5GEE_OVERHEAD__ETA_C", "0.05"},
                                                {"B5GEE_LIFI__FOV_DEG", "30"},
                                                {"B5GEE_SEPARATION", "non-separate"}}));
    EXPECT_EQ(c.scenario.m_t, 256);
    EXPECT_DOUBLE_EQ(c.devices.eta_c, 0.05);
    EXPECT_NEAR(c.lifi.fov, pi / 6.0, 1e-15);
    EXPECT_EQ(c.scenario.separation, Separation::non_separate);
    EXPECT_THROW(parse_config("", env_from({{"B5GEE_M_T", "many"}})), ParseError);
}

TEST(ConfigProperties, WriterRoundTripsRandomBundles) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.001, 0.9);
    for (int trial = 0; trial < 50; ++trial) {
        Config c;
        c.scenario.m_t = 1 + static_cast<int>(rng() % 1024);
        c.scenario.gamma = u(rng);
        c.scenario.noise_variance = u(rng) * 1e-13;
        c.scenario.pilot_len = trial % 2 ? std::optional<int>(1 + static_cast<int>(rng() % 50)) : std::nullopt;
        c.scenario.iap_kind = trial % 3 ? IapKind::lifi : IapKind::mmwave;
        c.scenario.layout = trial % 4 ? Layout::random : Layout::deterministic;
        c.scenario.rate_weights = {u(rng), u(rng), u(rng), u(rng)};
        c.devices.eta_c = u(rng);
        c.devices.mbsala.p_mod = u(rng) / 7.0;
        c.devices.iap.doherty_continuous = trial % 2 == 0;
        c.lifi.half_angle = u(rng) * 1.5;
        c.lifi.tx_positions = {{u(rng), -u(rng), 3.0}, {1e-17, 2.5, 3.0}};
        c.lifi.mu_phi = u(rng) * 1e-30;
        for (bool prov : {false, true}) {
            EXPECT_EQ(parse_config(write_config(c, prov)), c) << write_config(c, prov);
        }
    }
}

TEST(ConfigProperties, EveryDefaultCarriesAProvenanceTag) {
    const Config c;
    int fields = 0;
    visit_fields(c, [&](const FieldInfo& f, const auto&) {
        ++fields;
        const auto colon = f.provenance.find(':');
        ASSERT_NE(colon, std::string_view::npos) << f.key;
        const auto tag = f.provenance.substr(0, colon);
        EXPECT_TRUE(tag == "reference" || tag == "earth" || tag == "assumed" || tag == "derived")
            << f.key << " has tag " << tag;
        EXPECT_GT(f.provenance.size(), colon + 2) << f.key << " has no note";
    });
    EXPECT_GE(fields, 80);
}

TEST(LambertianOrder, Examples) {
    EXPECT_NEAR(lambertian_order(deg_to_rad(60.0)), 1.0, 1e-15);
    EXPECT_NEAR(lambertian_order(deg_to_rad(45.0)), 2.0, 1e-12);
    const double oracle = std::log(0.5) / std::log(std::cos(deg_to_rad(30.0)));
    EXPECT_NEAR(lambertian_order(deg_to_rad(30.0)), oracle, 1e-12);
    EXPECT_NEAR(lambertian_order(deg_to_rad(30.0)), 4.8188, 5e-5);
}

TEST(LambertianOrder, DomainAndShape) {
    EXPECT_THROW(lambertian_order(0.0), DomainError);
    EXPECT_THROW(lambertian_order(pi / 2.0), DomainError);
    EXPECT_THROW(lambertian_order(-0.1), DomainError);
    double prev = INFINITY;
    for (double a = 0.05; a < pi / 2.0 - 0.01; a += 0.01) {
        const double m = lambertian_order(a);
        EXPECT_GT(m, 0.0);
        EXPECT_LT(m, prev);  // wider beams, lower order
        prev = m;
    }
}
