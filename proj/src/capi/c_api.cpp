#include "adrcwave/adrcwave.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "adrcwave/analysis.hpp"
#include "adrcwave/bundle.hpp"
#include "adrcwave/closed_loop.hpp"
#include "adrcwave/config.hpp"
#include "adrcwave/error.hpp"

struct awc_config {
    adrcwave::ConfigDocument doc;
};

struct awc_run {
    adrcwave::ScenarioConfig cfg;
    adrcwave::RunRecord record;
};

namespace {

thread_local std::string g_last_error;

awc_status fail(awc_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

awc_status map_error(const adrcwave::Error& e) {
    using adrcwave::ErrorKind;
    switch (e.kind()) {
        case ErrorKind::Divergence:
            return fail(AWC_ERR_DIVERGED, e.what());
        case ErrorKind::Io:
            return fail(AWC_ERR_IO, e.what());
        case ErrorKind::Fit:
        case ErrorKind::Span:
        case ErrorKind::History:
            return fail(AWC_ERR_INVALID_ARGUMENT, e.what());
        default:
            return fail(AWC_ERR_CONFIG, e.what());
    }
}

template <class F>
awc_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const adrcwave::Error& e) {
        return map_error(e);
    } catch (const std::bad_alloc&) {
        return fail(AWC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(AWC_ERR_INTERNAL, e.what());
    }
}

awc_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed != nullptr) *needed = s.size();
    if (buf != nullptr && cap > 0) {
        const size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return AWC_OK;
}

}  // namespace

extern "C" {

const char* awc_status_string(awc_status status) {
    switch (status) {
        case AWC_OK:
            return "ok";
        case AWC_ERR_CONFIG:
            return "configuration error";
        case AWC_ERR_DIVERGED:
            return "simulation diverged";
        case AWC_ERR_IO:
            return "input/output error";
        case AWC_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case AWC_ERR_VERIFY_FAILED:
            return "verification failed";
        case AWC_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

const char* awc_last_error(void) { return g_last_error.c_str(); }

awc_status awc_config_create(awc_config** out) {
    if (out == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null output pointer");
    return guarded([&] {
        *out = new awc_config{};
        return AWC_OK;
    });
}

awc_config* awc_config_clone(const awc_config* cfg) {
    if (cfg == nullptr) return nullptr;
    try {
        return new awc_config{*cfg};
    } catch (...) {
        return nullptr;
    }
}

void awc_config_destroy(awc_config* cfg) { delete cfg; }

awc_status awc_config_load(awc_config* cfg, const char* path) {
    if (cfg == nullptr || path == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        cfg->doc = adrcwave::load_config(path);
        return AWC_OK;
    });
}

awc_status awc_config_parse(awc_config* cfg, const char* text) {
    if (cfg == nullptr || text == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        cfg->doc = adrcwave::parse_config(text);
        return AWC_OK;
    });
}

awc_status awc_config_set(awc_config* cfg, const char* key, const char* value) {
    if (cfg == nullptr || key == nullptr || value == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        adrcwave::set_option(cfg->doc.scenario, key, value);
        return AWC_OK;
    });
}

awc_status awc_config_get(const awc_config* cfg, const char* key, char* buf, size_t cap, size_t* needed) {
    if (cfg == nullptr || key == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return copy_out(adrcwave::get_option(cfg->doc.scenario, key), buf, cap, needed); });
}

awc_status awc_config_echo(const awc_config* cfg, char* buf, size_t cap, size_t* needed) {
    if (cfg == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return copy_out(adrcwave::echo_config(cfg->doc.scenario), buf, cap, needed); });
}

awc_status awc_config_validate(const awc_config* cfg) {
    if (cfg == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        adrcwave::resolve(cfg->doc.scenario).validate();
        return AWC_OK;
    });
}

size_t awc_config_sweep_count(const awc_config* cfg) { return cfg == nullptr ? 0 : cfg->doc.sweep.size(); }

awc_status awc_config_sweep_entry(const awc_config* cfg, size_t index, char* key, size_t key_cap, char* values,
                                  size_t values_cap) {
    if (cfg == nullptr || index >= cfg->doc.sweep.size()) return fail(AWC_ERR_INVALID_ARGUMENT, "bad sweep index");
    return guarded([&] {
        const auto& [k, vs] = cfg->doc.sweep[index];
        std::string joined;
        for (size_t i = 0; i < vs.size(); ++i) joined += (i ? "," : "") + vs[i];
        copy_out(k, key, key_cap, nullptr);
        return copy_out(joined, values, values_cap, nullptr);
    });
}

awc_status awc_run_execute(const awc_config* cfg, awc_run** out) {
    if (cfg == nullptr || out == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto* r = new awc_run{adrcwave::resolve(cfg->doc.scenario), {}};
        try {
            r->record = adrcwave::run(r->cfg);
        } catch (...) {
            delete r;
            throw;
        }
        *out = r;
        if (r->record.diverged) return fail(AWC_ERR_DIVERGED, r->record.message);
        return AWC_OK;
    });
}

void awc_run_destroy(awc_run* run) { delete run; }

int awc_run_diverged(const awc_run* run) { return run != nullptr && run->record.diverged ? 1 : 0; }

size_t awc_run_row_count(const awc_run* run) { return run == nullptr ? 0 : run->record.rows.size(); }

size_t awc_run_column_count(void) { return adrcwave::kTrajectoryColumns; }

const char* awc_run_column_name(size_t column) {
    if (column >= static_cast<size_t>(adrcwave::kTrajectoryColumns)) return nullptr;
    return adrcwave::kTrajectoryColumnNames[column];
}

awc_status awc_run_row(const awc_run* run, size_t row, double* out, size_t cap) {
    if (run == nullptr || out == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    if (row >= run->record.rows.size()) return fail(AWC_ERR_INVALID_ARGUMENT, "row index out of range");
    if (cap < static_cast<size_t>(adrcwave::kTrajectoryColumns)) {
        return fail(AWC_ERR_INVALID_ARGUMENT, "output buffer smaller than the column count");
    }
    for (int c = 0; c < adrcwave::kTrajectoryColumns; ++c) {
        out[c] = adrcwave::column_value(run->record.rows[row], c);
    }
    return AWC_OK;
}

awc_status awc_run_fit_slope(const awc_run* run, const char* column, double t0, double t1, double* slope) {
    if (run == nullptr || column == nullptr || slope == nullptr) {
        return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    }
    const int c = adrcwave::column_index(column);
    if (c < 0) return fail(AWC_ERR_INVALID_ARGUMENT, std::string("unknown column '") + column + "'");
    return guarded([&] {
        std::vector<double> t, v;
        for (const auto& r : run->record.rows) {
            t.push_back(r.t);
            v.push_back(adrcwave::column_value(r, c));
        }
        *slope = adrcwave::fit_decay(t, v, t0, t1).slope();
        return AWC_OK;
    });
}

awc_status awc_run_summary(const awc_run* run, char* buf, size_t cap, size_t* needed) {
    if (run == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return copy_out(adrcwave::summary_json(run->record, run->cfg), buf, cap, needed); });
}

awc_status awc_run_write_bundle(const awc_run* run, const char* dir) {
    if (run == nullptr || dir == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        adrcwave::write_bundle(run->record, run->cfg, dir);
        return AWC_OK;
    });
}

awc_status awc_verify_bundle(const char* dir, char* report, size_t cap, size_t* needed) {
    if (dir == nullptr) return fail(AWC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const adrcwave::VerifyReport r = adrcwave::verify_bundle(dir);
        copy_out(r.text(), report, cap, needed);
        if (!r.pass()) return fail(AWC_ERR_VERIFY_FAILED, "bundle verification failed");
        return AWC_OK;
    });
}

}  // extern "C"
