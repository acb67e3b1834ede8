#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "adrcwave/adrcwave.h"

namespace fs = std::filesystem;

namespace {

struct Config {
    awc_config* p = nullptr;
    Config() { REQUIRE(awc_config_create(&p) == AWC_OK); }
    ~Config() { awc_config_destroy(p); }
    void set(const char* key, const char* value) { REQUIRE(awc_config_set(p, key, value) == AWC_OK); }
};

std::string get(const awc_config* cfg, const char* key) {
    size_t needed = 0;
    REQUIRE(awc_config_get(cfg, key, nullptr, 0, &needed) == AWC_OK);
    std::vector<char> buf(needed + 1);
    REQUIRE(awc_config_get(cfg, key, buf.data(), buf.size(), nullptr) == AWC_OK);
    return buf.data();
}

}  // namespace

TEST_CASE("status strings and the error slot") {
    CHECK(std::strlen(awc_status_string(AWC_OK)) > 0);
    CHECK(std::string(awc_status_string(AWC_ERR_DIVERGED)) != awc_status_string(AWC_ERR_CONFIG));
    CHECK(awc_config_create(nullptr) == AWC_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(awc_last_error()) > 0);
}

TEST_CASE("config handles") {
    Config cfg;
    cfg.set("controller.c3", "2");
    CHECK(get(cfg.p, "controller.c3") == "2");
    CHECK(awc_config_set(cfg.p, "controller.speed", "2") == AWC_ERR_CONFIG);
    CHECK(std::string(awc_last_error()).find("controller.speed") != std::string::npos);

    char small[2];
    size_t needed = 0;
    CHECK(awc_config_get(cfg.p, "plant.variant", small, sizeof small, &needed) == AWC_OK);
    CHECK(needed == std::strlen("spring"));
    CHECK(std::strlen(small) == 1);

    awc_config* copy = awc_config_clone(cfg.p);
    REQUIRE(copy != nullptr);
    CHECK(get(copy, "controller.c3") == "2");
    awc_config_destroy(copy);

    cfg.set("estimator.c0", "1.5");
    CHECK(awc_config_validate(cfg.p) == AWC_ERR_CONFIG);
    CHECK(std::string(awc_last_error()).find("c0") != std::string::npos);
    cfg.set("estimator.c0", "0.5");
    CHECK(awc_config_validate(cfg.p) == AWC_OK);

    CHECK(awc_config_echo(cfg.p, nullptr, 0, &needed) == AWC_OK);
    CHECK(needed > 100);
    CHECK(awc_config_load(cfg.p, "/nonexistent/adrcwave.ini") == AWC_ERR_IO);
}

TEST_CASE("sweep entries") {
    Config cfg;
    REQUIRE(awc_config_parse(cfg.p, "[plant]\nq = 0.5\n[sweep]\ncontroller.c3 = 0.5, 1, 2\n") == AWC_OK);
    CHECK(awc_config_sweep_count(cfg.p) == 1);
    char key[64], values[64];
    REQUIRE(awc_config_sweep_entry(cfg.p, 0, key, sizeof key, values, sizeof values) == AWC_OK);
    CHECK(std::string(key) == "controller.c3");
    CHECK(std::string(values) == "0.5,1,2");
    CHECK(awc_config_sweep_entry(cfg.p, 1, key, sizeof key, values, sizeof values) == AWC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run lifecycle") {
    Config cfg;
    cfg.set("run.n", "50");
    cfg.set("run.T", "12");
    awc_run* run = nullptr;
    REQUIRE(awc_run_execute(cfg.p, &run) == AWC_OK);
    CHECK(awc_run_diverged(run) == 0);
    CHECK(awc_run_row_count(run) == 601);
    const size_t columns = awc_run_column_count();
    CHECK(columns == 18);
    CHECK(std::string(awc_run_column_name(0)) == "t");
    CHECK(awc_run_column_name(columns) == nullptr);

    std::vector<double> row(columns);
    REQUIRE(awc_run_row(run, 600, row.data(), row.size()) == AWC_OK);
    CHECK(row[0] == doctest::Approx(12.0));
    CHECK(awc_run_row(run, 601, row.data(), row.size()) == AWC_ERR_INVALID_ARGUMENT);
    CHECK(awc_run_row(run, 0, row.data(), 3) == AWC_ERR_INVALID_ARGUMENT);

    double slope = 0.0;
    REQUIRE(awc_run_fit_slope(run, "norm_w", 5.0, 12.0, &slope) == AWC_OK);
    CHECK(slope < 0.0);
    CHECK(awc_run_fit_slope(run, "nope", 5.0, 12.0, &slope) == AWC_ERR_INVALID_ARGUMENT);

    size_t needed = 0;
    REQUIRE(awc_run_summary(run, nullptr, 0, &needed) == AWC_OK);
    std::string summary(needed + 1, '\0');
    REQUIRE(awc_run_summary(run, summary.data(), summary.size(), nullptr) == AWC_OK);
    CHECK(summary.find("\"decay_fits\"") != std::string::npos);

    const fs::path dir = fs::temp_directory_path() / "adrcwave_capi_bundle";
    fs::remove_all(dir);
    REQUIRE(awc_run_write_bundle(run, dir.c_str()) == AWC_OK);
    awc_run_destroy(run);

    std::string report(4096, '\0');
    CHECK(awc_verify_bundle(dir.c_str(), report.data(), report.size(), &needed) == AWC_OK);
    CHECK(report.find("PASS") != std::string::npos);
    CHECK(awc_verify_bundle("/nonexistent/bundle", nullptr, 0, nullptr) == AWC_ERR_IO);
}

TEST_CASE("configuration and divergence outcomes") {
    Config bad;
    bad.set("estimator.c0", "1.5");
    awc_run* run = nullptr;
    CHECK(awc_run_execute(bad.p, &run) == AWC_ERR_CONFIG);
    CHECK(run == nullptr);

    Config open;
    open.set("run.n", "50");
    open.set("run.open_loop", "true");
    open.set("run.max_amplitude", "5");
    REQUIRE(awc_run_execute(open.p, &run) == AWC_ERR_DIVERGED);
    REQUIRE(run != nullptr);
    CHECK(awc_run_diverged(run) == 1);
    CHECK(awc_run_row_count(run) > 0);
    awc_run_destroy(run);
    awc_run_destroy(nullptr);
}
