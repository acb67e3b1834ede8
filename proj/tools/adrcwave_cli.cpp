#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "adrcwave/adrcwave.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;

struct ConfigDeleter {
    void operator()(awc_config* c) const { awc_config_destroy(c); }
};
struct RunDeleter {
    void operator()(awc_run* r) const { awc_run_destroy(r); }
};
using ConfigPtr = std::unique_ptr<awc_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<awc_run, RunDeleter>;

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
    bool open_loop = false;
    bool filter_fhat = false;
    bool strict_compat = false;
    int n = 0;
    double T = 0.0;
    long long seed = -1;
};

std::string text_of(awc_status (*getter)(const awc_config*, char*, size_t, size_t*), const awc_config* cfg) {
    size_t needed = 0;
    getter(cfg, nullptr, 0, &needed);
    std::string out(needed + 1, '\0');
    getter(cfg, out.data(), out.size(), &needed);
    out.resize(needed);
    return out;
}

std::string option(const awc_config* cfg, const char* key) {
    size_t needed = 0;
    awc_config_get(cfg, key, nullptr, 0, &needed);
    std::string out(needed + 1, '\0');
    awc_config_get(cfg, key, out.data(), out.size(), &needed);
    out.resize(needed);
    return out;
}

std::string run_summary(const awc_run* run) {
    size_t needed = 0;
    awc_run_summary(run, nullptr, 0, &needed);
    std::string out(needed + 1, '\0');
    awc_run_summary(run, out.data(), out.size(), &needed);
    out.resize(needed);
    return out;
}

bool set_key_value(awc_config* cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
        return false;
    }
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (awc_config_set(cfg, key.c_str(), value.c_str()) != AWC_OK) {
        std::cerr << "error: " << awc_last_error() << "\n";
        return false;
    }
    return true;
}

ConfigPtr build_config(const Overrides& o) {
    awc_config* raw = nullptr;
    if (awc_config_create(&raw) != AWC_OK) return nullptr;
    ConfigPtr cfg(raw);
    if (!o.config_path.empty() && awc_config_load(cfg.get(), o.config_path.c_str()) != AWC_OK) {
        std::cerr << "error: " << awc_last_error() << "\n";
        return nullptr;
    }
    for (const std::string& kv : o.sets) {
        if (!set_key_value(cfg.get(), kv)) return nullptr;
    }
    std::vector<std::string> flags;
    if (o.open_loop) flags.push_back("run.open_loop=true");
    if (o.filter_fhat) flags.push_back("run.filter_fhat=true");
    if (o.strict_compat) flags.push_back("run.strict_compat=true");
    if (o.n > 0) flags.push_back("run.n=" + std::to_string(o.n));
    if (o.T > 0.0) flags.push_back("run.T=" + CLI::detail::to_string(o.T));
    if (o.seed >= 0) flags.push_back("init.seed=" + std::to_string(o.seed));
    for (const std::string& kv : flags) {
        if (!set_key_value(cfg.get(), kv)) return nullptr;
    }
    return cfg;
}

double window_end(const awc_config* cfg) {
    return std::min(std::stod(option(cfg, "run.fit_end")), std::stod(option(cfg, "run.T")));
}

int cmd_run(const Overrides& o) {
    ConfigPtr cfg = build_config(o);
    if (!cfg) return kExitConfig;
    if (awc_config_validate(cfg.get()) != AWC_OK) {
        std::cerr << "config error: " << awc_last_error() << "\n";
        return kExitConfig;
    }
    awc_run* raw = nullptr;
    const awc_status st = awc_run_execute(cfg.get(), &raw);
    RunPtr run(raw);
    if (!run) {
        std::cerr << "config error: " << awc_last_error() << "\n";
        return kExitConfig;
    }
    if (awc_run_write_bundle(run.get(), o.out_dir.c_str()) != AWC_OK) {
        std::cerr << "error: " << awc_last_error() << "\n";
        return kExitConfig;
    }
    if (st == AWC_ERR_DIVERGED) {
        std::cerr << "diverged: " << awc_last_error() << " (partial outputs written to " << o.out_dir << ")\n";
        return kExitDiverged;
    }
    double slope = 0.0;
    const double t0 = std::stod(option(cfg.get(), "run.fit_start"));
    std::cout << "complete: " << awc_run_row_count(run.get()) << " rows written to " << o.out_dir;
    if (awc_run_fit_slope(run.get(), "norm_w", t0, window_end(cfg.get()), &slope) == AWC_OK) {
        std::cout << "; plant norm log-slope over [" << t0 << ", " << window_end(cfg.get()) << "] = " << slope;
    }
    std::cout << "\n";
    return kExitOk;
}

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

struct SweepRow {
    std::vector<std::string> values;
    std::string name;
    std::string status;
    std::string slope;
    std::string message;
};

std::vector<std::string> split_values(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    for (char c : s + ",") {
        if (c == ',') {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
            item.clear();
        } else {
            item += c;
        }
    }
    return out;
}

bool value_less(const std::string& a, const std::string& b) {
    double x = 0.0, y = 0.0;
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
    const bool na = ra.ec == std::errc() && ra.ptr == a.data() + a.size();
    const bool nb = rb.ec == std::errc() && rb.ptr == b.data() + b.size();
    if (na && nb && x != y) return x < y;
    if (na != nb) return na;
    return a < b;
}

std::string csv_cell(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

int cmd_sweep(const Overrides& o, const std::vector<std::string>& grid_flags, int jobs) {
    ConfigPtr base = build_config(o);
    if (!base) return kExitConfig;

    std::vector<SweepAxis> axes;
    char key[256], values[4096];
    for (size_t i = 0; i < awc_config_sweep_count(base.get()); ++i) {
        awc_config_sweep_entry(base.get(), i, key, sizeof key, values, sizeof values);
        axes.push_back({key, split_values(values)});
    }
    for (const std::string& g : grid_flags) {
        const auto eq = g.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --grid expects key=v1,v2,..., got '" << g << "'\n";
            return kExitConfig;
        }
        axes.push_back({g.substr(0, eq), split_values(g.substr(eq + 1))});
    }
    if (axes.empty()) {
        std::cerr << "error: empty sweep grid (use a [sweep] section or --grid key=v1,v2)\n";
        return kExitConfig;
    }
    for (const SweepAxis& a : axes) {
        if (a.values.empty()) {
            std::cerr << "error: sweep axis '" << a.key << "' has no values\n";
            return kExitConfig;
        }
        if (option(base.get(), a.key.c_str()).empty() && *awc_last_error() != '\0') {
            std::cerr << "error: " << awc_last_error() << "\n";
            return kExitConfig;
        }
    }

    std::vector<SweepRow> rows(1);
    for (const SweepAxis& a : axes) {
        std::vector<SweepRow> next;
        for (const SweepRow& r : rows) {
            for (const std::string& v : a.values) {
                SweepRow n = r;
                n.values.push_back(v);
                next.push_back(std::move(n));
            }
        }
        rows = std::move(next);
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(), b.values.end(),
                                            value_less);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::string name = "run_" + std::string(3 - std::min<std::size_t>(3, std::to_string(i).size()), '0') +
                           std::to_string(i);
        for (std::size_t k = 0; k < axes.size(); ++k) name += "_" + axes[k].key + "=" + rows[i].values[k];
        rows[i].name = name;
    }

    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << o.out_dir << ": " << ec.message() << "\n";
        return kExitConfig;
    }

    std::atomic<std::size_t> next_index{0};
    auto worker = [&] {
        for (std::size_t i = next_index++; i < rows.size(); i = next_index++) {
            SweepRow& row = rows[i];
            ConfigPtr cfg(awc_config_clone(base.get()));
            bool ok = cfg != nullptr;
            for (std::size_t k = 0; ok && k < axes.size(); ++k) {
                ok = awc_config_set(cfg.get(), axes[k].key.c_str(), row.values[k].c_str()) == AWC_OK;
            }
            if (ok) ok = awc_config_validate(cfg.get()) == AWC_OK;
            if (!ok) {
                row.status = "config_error";
                row.message = awc_last_error();
                continue;
            }
            awc_run* raw = nullptr;
            const awc_status st = awc_run_execute(cfg.get(), &raw);
            RunPtr run(raw);
            if (!run) {
                row.status = "config_error";
                row.message = awc_last_error();
                continue;
            }
            row.status = st == AWC_ERR_DIVERGED ? "diverged" : "ok";
            if (st == AWC_ERR_DIVERGED) row.message = awc_last_error();
            const std::string dir = (fs::path(o.out_dir) / row.name).string();
            if (awc_run_write_bundle(run.get(), dir.c_str()) != AWC_OK) {
                row.status = "io_error";
                row.message = awc_last_error();
                continue;
            }
            double slope = 0.0;
            const double t0 = std::stod(option(cfg.get(), "run.fit_start"));
            if (awc_run_fit_slope(run.get(), "norm_w", t0, window_end(cfg.get()), &slope) == AWC_OK) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", slope);
                row.slope = buf;
            }
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    std::string index = "run";
    for (const SweepAxis& a : axes) index += "," + csv_cell(a.key);
    index += ",status,slope_norm_w,divergence_or_error\n";
    for (const SweepRow& r : rows) {
        index += r.name;
        for (const std::string& v : r.values) index += "," + csv_cell(v);
        index += "," + r.status + "," + r.slope + "," + csv_cell(r.message) + "\n";
    }
    const fs::path index_path = fs::path(o.out_dir) / "index.csv";
    const fs::path tmp = fs::path(o.out_dir) / "index.csv.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << index;
        if (!out) {
            std::cerr << "error: cannot write " << tmp << "\n";
            return kExitConfig;
        }
    }
    fs::rename(tmp, index_path, ec);
    if (ec) {
        std::cerr << "error: cannot write " << index_path << ": " << ec.message() << "\n";
        return kExitConfig;
    }
    std::cout << index;
    return kExitOk;
}

int verify_one(const fs::path& dir) {
    size_t needed = 0;
    awc_status st = awc_verify_bundle(dir.c_str(), nullptr, 0, &needed);
    if (st != AWC_OK && st != AWC_ERR_VERIFY_FAILED) {
        std::cout << dir.string() << ": ERROR " << awc_last_error() << "\n";
        return 1;
    }
    std::string report(needed + 1, '\0');
    st = awc_verify_bundle(dir.c_str(), report.data(), report.size(), &needed);
    report.resize(needed);
    std::cout << "== " << dir.string() << "\n" << report;
    return st == AWC_OK ? 0 : 1;
}

int cmd_verify(const std::string& out_dir) {
    const fs::path root(out_dir);
    if (fs::exists(root / "trajectory.csv") || fs::exists(root / "config.ini")) return verify_one(root);
    std::vector<fs::path> bundles;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(root, ec)) {
        if (entry.is_directory() && fs::exists(entry.path() / "config.ini")) bundles.push_back(entry.path());
    }
    if (ec || bundles.empty()) {
        std::cerr << "error: no bundles found under " << out_dir << "\n";
        return 1;
    }
    std::sort(bundles.begin(), bundles.end());
    int failures = 0;
    for (const fs::path& b : bundles) failures += verify_one(b);
    std::cout << "bundles verified: " << bundles.size() << ", failing: " << failures << "\n";
    return failures == 0 ? 0 : 1;
}

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "Scenario config file ([section] key = value)");
    app->add_option("--out", o.out_dir, "Output directory")->required();
    app->add_option("--set", o.sets, "Override an option, e.g. --set controller.c3=2");
    app->add_flag("--open-loop", o.open_loop, "Force u to run.open_loop_u (default 0)");
    app->add_flag("--filter-fhat", o.filter_fhat, "Average the last three disturbance traces");
    app->add_flag("--strict-compat", o.strict_compat, "Reject initial data needing a compatibility shift");
    app->add_option("--n", o.n, "Grid cells");
    app->add_option("--T", o.T, "Final time");
    app->add_option("--seed", o.seed, "Seed of the random-smooth initial data");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Output-feedback disturbance rejection for unstable wave equations"};
    app.require_subcommand(1);

    Overrides run_opts;
    CLI::App* run = app.add_subcommand("run", "Run one scenario and write a bundle");
    add_common(run, run_opts);

    Overrides sweep_opts;
    std::vector<std::string> grid;
    int jobs = static_cast<int>(std::max(1u, std::min(4u, std::thread::hardware_concurrency())));
    CLI::App* sweep = app.add_subcommand("sweep", "Run the cross product of a parameter grid");
    add_common(sweep, sweep_opts);
    sweep->add_option("--grid", grid, "Sweep axis key=v1,v2,... (repeatable)");
    sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

    std::string verify_dir;
    CLI::App* verify = app.add_subcommand("verify", "Re-check stored bundles");
    verify->add_option("--out,dir", verify_dir, "Bundle directory or sweep directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (run->parsed()) return cmd_run(run_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, grid, jobs);
    return cmd_verify(verify_dir);
}
