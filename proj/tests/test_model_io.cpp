#include <random>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "rtann/model_io.hpp"

using namespace rtann;
using testutil::TempDir;

namespace {

SavedModel fit_kind(const std::string& kind, const Dataset& ds) {
    SavedModel saved;
    saved.kind = kind;
    saved.schema = ds.column_names;
    if (kind == "tree") {
        TreeConfig cfg;
        cfg.minsplit_fraction = 0.05;
        saved.payload = fit_tree(ds, cfg);
    } else if (kind == "mlp") {
        MlpConfig cfg;
        cfg.max_epochs = 120;
        cfg.seed = 31;
        saved.payload = fit_mlp(ds, cfg);
    } else if (kind == "hybrid") {
        HybridConfig cfg;
        cfg.mlp.max_epochs = 120;
        cfg.mlp.seed = 31;
        saved.payload = fit_hybrid(ds, cfg);
    } else if (kind == "ols") {
        saved.payload = fit_ols(ds);
    } else if (kind == "stepwise") {
        saved.payload = fit_stepwise(ds);
    } else {
        saved.payload = fit_pls(ds);
    }
    return saved;
}

}  // namespace

TEST_CASE("every model kind survives a save/load round trip bit for bit") {
    const Dataset ds = synthesize({"friedman-like", 80, 1.0, 12});
    std::mt19937_64 eng(1234);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TempDir dir;

    for (const char* kind : {"tree", "mlp", "hybrid", "ols", "stepwise", "pls"}) {
        CAPTURE(kind);
        const SavedModel original = fit_kind(kind, ds);
        const auto path = dir.file(std::string(kind) + ".json");
        save_model(original, path);
        const SavedModel loaded = load_model(path);
        CHECK(loaded.kind == original.kind);
        CHECK(loaded.schema == original.schema);
        CHECK(loaded.format_version == kModelFormatVersion);

        std::vector<double> x(ds.p);
        for (int trial = 0; trial < 1000; ++trial) {
            for (double& v : x) v = unit(eng);
            const double before = predict_model(original, x);
            const double after = predict_model(loaded, x);
            if (before != after) {
                CAPTURE(trial);
                REQUIRE(before == after);
            }
        }
    }
}

TEST_CASE("saving twice produces identical bytes") {
    const Dataset ds = synthesize({"linear", 40, 0.5, 4});
    TempDir dir;
    const SavedModel model = fit_kind("hybrid", ds);
    save_model(model, dir.file("a.json"));
    save_model(model, dir.file("b.json"));
    CHECK(testutil::slurp(dir.file("a.json")) == testutil::slurp(dir.file("b.json")));
}

TEST_CASE("a newer format version is refused") {
    const Dataset ds = synthesize({"linear", 30, 0.5, 5});
    TempDir dir;
    const auto path = dir.file("m.json");
    SavedModel model = fit_kind("ols", ds);
    model.format_version = kModelFormatVersion + 1;
    save_model(model, path);
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("newer than supported"),
                         std::runtime_error);
}

TEST_CASE("bad model files fail with a clear diagnostic") {
    TempDir dir;
    const auto garbled = dir.file("garbled.json");
    testutil::write_file(garbled, "{not json");
    CHECK_THROWS_WITH_AS(load_model(garbled), doctest::Contains("malformed model file"),
                         std::runtime_error);

    const auto unknown = dir.file("unknown.json");
    testutil::write_file(unknown,
                         "{\"format_version\": 1, \"kind\": \"forest\", "
                         "\"schema\": [\"x\", \"y\"], \"payload\": {}}");
    CHECK_THROWS_WITH_AS(load_model(unknown), doctest::Contains("unknown model kind"),
                         std::runtime_error);

    CHECK_THROWS_AS(load_model(dir.file("absent.json")), std::runtime_error);
}

TEST_CASE("predictor_count reflects what each model consumes") {
    const Dataset ds = synthesize({"friedman-like", 60, 1.0, 9});
    CHECK(predictor_count(fit_kind("tree", ds)) == 5);
    CHECK(predictor_count(fit_kind("mlp", ds)) == 5);
    CHECK(predictor_count(fit_kind("ols", ds)) == 5);

    const SavedModel hybrid = fit_kind("hybrid", ds);
    const auto& payload = std::get<HybridModel>(hybrid.payload);
    CHECK(predictor_count(hybrid) == payload.selected.size() + 1);

    const SavedModel sw = fit_kind("stepwise", ds);
    CHECK(predictor_count(sw) == std::get<LinearModel>(sw.payload).used_features.size());
}

TEST_CASE("schema keeps the target in final position") {
    const Dataset ds = synthesize({"axis-steps", 30, 0.5, 2});
    TempDir dir;
    const SavedModel model = fit_kind("tree", ds);
    const auto path = dir.file("t.json");
    save_model(model, path);
    const SavedModel loaded = load_model(path);
    REQUIRE(loaded.schema.size() == 3);
    CHECK(loaded.schema.back() == "y");
}
