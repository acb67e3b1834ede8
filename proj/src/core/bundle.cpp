#include "adrcwave/bundle.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "adrcwave/analysis.hpp"
#include "adrcwave/config.hpp"
#include "adrcwave/error.hpp"

namespace adrcwave {

namespace {

using nlohmann::ordered_json;

constexpr const char* kColumnDocs[kTrajectoryColumns] = {
    "time",
    "boundary control u(t)",
    "external disturbance d(t)",
    "internal uncertainty f(t)",
    "total disturbance F = f + d",
    "disturbance estimate applied by the controller",
    "F_hat - F",
    "h-norm of (w, w_t)",
    "h-norm of the observer state",
    "h-norm of the observer error",
    "h-norm of the estimator error v - w",
    "h-norm of the estimator error beta = z - p",
    "h-norm of the transformed observer state",
    "sup-norm of W",
    "sup-norm of Y",
    "sup-norm of Z (zero for the spring variant)",
    "measured w(0,t)",
    "measured w(1,t)",
};

constexpr const char* kDiagnosticDocs[kDiagnosticColumns] = {
    "time",
    "estimator norm sqrt(h(v)^2 + h(z)^2 + int W_x^2 + W(0)^2)",
    "h-norm of (p, p_t), p = w - v - W",
    "rho = 2 int (x-1) p_t p_x",
    "int over [t-1,t] of p_t(0,s)^2 (zero before t=1)",
    "3 max over [t-1,t] of h(p)^2 (zero before t=1)",
};

std::string trajectory_csv(const RunRecord& rec) {
    std::string out = "# trajectory table; all quantities nondimensional (unit interval, unit wave speed)\n";
    for (int c = 0; c < kTrajectoryColumns; ++c) {
        out += "# " + std::to_string(c + 1) + ". " + kTrajectoryColumnNames[c] + ": " + kColumnDocs[c] + "\n";
    }
    for (int c = 0; c < kTrajectoryColumns; ++c) {
        out += c ? "," : "";
        out += kTrajectoryColumnNames[c];
    }
    out += "\n";
    for (const TrajectoryRow& r : rec.rows) {
        for (int c = 0; c < kTrajectoryColumns; ++c) {
            out += c ? "," : "";
            out += format_double(column_value(r, c));
        }
        out += "\n";
    }
    return out;
}

std::string diagnostics_csv(const RunRecord& rec) {
    std::string out = "# Lyapunov and estimator diagnostics\n";
    for (int c = 0; c < kDiagnosticColumns; ++c) {
        out += "# " + std::to_string(c + 1) + ". " + kDiagnosticColumnNames[c] + ": " + kDiagnosticDocs[c] + "\n";
    }
    for (int c = 0; c < kDiagnosticColumns; ++c) {
        out += c ? "," : "";
        out += kDiagnosticColumnNames[c];
    }
    out += "\n";
    for (const DiagnosticRow& d : rec.diagnostics) {
        const double v[kDiagnosticColumns] = {d.t, d.norm_est, d.norm_p, d.rho, d.window, d.window_bound};
        for (int c = 0; c < kDiagnosticColumns; ++c) {
            out += c ? "," : "";
            out += format_double(v[c]);
        }
        out += "\n";
    }
    return out;
}

std::string config_text(const RunRecord& rec, const ScenarioConfig& cfg) {
    std::string out = "# resolved scenario; the trace point x0 snaps to the nearest grid node\n";
    out += "# compatibility shifts applied: W=" + format_double(rec.compat.W_shift) +
           " Y=" + format_double(rec.compat.Y_shift) + " Z=" + format_double(rec.compat.Z_shift) +
           " z=" + format_double(rec.compat.z_shift) + "\n";
    return out + echo_config(cfg);
}

struct Lyapunov {
    double rho_ratio = 0.0;
    double window_ratio = 0.0;
    std::size_t window_samples = 0;
};

Lyapunov lyapunov_ratios(const std::vector<DiagnosticRow>& diag) {
    Lyapunov l;
    for (const DiagnosticRow& d : diag) {
        const double hp2 = d.norm_p * d.norm_p;
        if (hp2 > 0.0) l.rho_ratio = std::max(l.rho_ratio, std::abs(d.rho) / hp2);
        else if (d.rho != 0.0) l.rho_ratio = std::numeric_limits<double>::infinity();
        if (d.window_bound > 0.0) {
            l.window_ratio = std::max(l.window_ratio, d.window / d.window_bound);
            ++l.window_samples;
        }
    }
    return l;
}

std::vector<double> column(const std::vector<TrajectoryRow>& rows, int c) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const TrajectoryRow& r : rows) out.push_back(column_value(r, c));
    return out;
}

bool tail_applicable(const ScenarioConfig& cfg) {
    return !cfg.open_loop && cfg.disturbance.kind != DisturbanceSpec::Kind::BoundedNoise;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "missing bundle file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

Table read_csv(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::stringstream in(text);
    std::string line;
    Table t;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw Error(ErrorKind::Io, path.filename().string() + " line " + std::to_string(lineno) +
                                           ": expected " + std::to_string(t.header.size()) + " cells");
        }
        std::vector<double> row;
        for (const std::string& c : cells) {
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
                throw Error(ErrorKind::Io, path.filename().string() + " line " + std::to_string(lineno) +
                                               ": unreadable number '" + c + "'");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw Error(ErrorKind::Io, path.filename().string() + " has no header row");
    return t;
}

}  // namespace

std::string summary_json(const RunRecord& rec, const ScenarioConfig& cfg) {
    ordered_json j;
    j["status"] = rec.diverged ? "diverged" : "complete";
    if (rec.diverged) {
        j["divergence"] = {{"subsystem", rec.divergence_subsystem},
                           {"time", rec.divergence_time},
                           {"message", rec.message}};
    }
    j["variant"] = to_string(cfg.plant.variant);
    j["rows"] = rec.rows.size();
    j["compatibility_shifts"] = {{"W", rec.compat.W_shift},
                                 {"Y", rec.compat.Y_shift},
                                 {"Z", rec.compat.Z_shift},
                                 {"z", rec.compat.z_shift}};

    const std::vector<double> t = column(rec.rows, 0);
    const double t_last = t.empty() ? 0.0 : t.back();
    const double t1 = std::min(cfg.fit_end, t_last);
    ordered_json fits = ordered_json::object();
    for (const char* name : {"norm_w", "norm_w_hat", "norm_eps", "norm_vhat", "norm_beta", "norm_wtilde"}) {
        const std::vector<double> v = column(rec.rows, column_index(name));
        ordered_json f;
        f["window"] = {cfg.fit_start, t1};
        try {
            const double floor = v.empty() ? 0.0 : 1e3 * std::numeric_limits<double>::epsilon() * v.front();
            const DecayFit fit = fit_decay(t, v, cfg.fit_start, t1, floor);
            f["slope"] = fit.slope();
            f["rate"] = fit.rate;
            f["log_M"] = fit.intercept;
            f["residual"] = fit.residual;
            f["samples"] = fit.samples;
        } catch (const Error& e) {
            f["error"] = e.what();
        }
        fits[name] = f;
    }
    j["decay_fits"] = fits;

    ordered_json tail;
    try {
        const TailReport r = l2_tail(t, column(rec.rows, column_index("F_err")), 5.0);
        tail = {{"tau", r.tau},
                {"total", r.total},
                {"tail", r.tail},
                {"tail_fraction", r.tail_fraction},
                {"converging", r.converging},
                {"applicable", tail_applicable(cfg)}};
    } catch (const Error& e) {
        tail = {{"error", e.what()}};
    }
    j["f_hat_error_tail"] = tail;

    const Lyapunov l = lyapunov_ratios(rec.diagnostics);
    j["lyapunov"] = {{"max_rho_over_hp2", l.rho_ratio},
                     {"max_window_over_bound", l.window_ratio},
                     {"window_samples", l.window_samples}};
    return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error(ErrorKind::Io, "failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot rename '" + tmp.string() + "': " + ec.message());
}

void write_bundle(const RunRecord& rec, const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + dir.string() + "': " + ec.message());
    write_atomic(dir / "config.ini", config_text(rec, cfg));
    write_atomic(dir / "trajectory.csv", trajectory_csv(rec));
    write_atomic(dir / "diagnostics.csv", diagnostics_csv(rec));
    write_atomic(dir / "summary.json", summary_json(rec, cfg));
}

bool VerifyReport::pass() const {
    for (const VerifyCheck& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::string VerifyReport::text() const {
    std::string out;
    for (const VerifyCheck& c : checks) {
        out += std::string(c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
    }
    out += std::string("overall: ") + (pass() ? "PASS" : "FAIL");
    if (partial) out += " (partial: verdicts on the valid prefix of " + std::to_string(rows) + " rows)";
    out += "\n";
    return out;
}

VerifyReport verify_bundle(const std::filesystem::path& dir) {
    VerifyReport report;
    ScenarioConfig cfg;
    try {
        cfg = resolve(parse_config(read_file(dir / "config.ini")).scenario);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        throw Error(ErrorKind::Io, std::string("corrupt config.ini: ") + e.what());
    }
    const Table traj = read_csv(dir / "trajectory.csv");
    const Table diag = read_csv(dir / "diagnostics.csv");
    ordered_json summary;
    try {
        summary = ordered_json::parse(read_file(dir / "summary.json"));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, std::string("corrupt summary.json: ") + e.what());
    }
    report.partial = summary.value("status", "") == "diverged";
    report.rows = traj.rows.size();

    bool schema = traj.header.size() == static_cast<std::size_t>(kTrajectoryColumns) &&
                  diag.header.size() == static_cast<std::size_t>(kDiagnosticColumns) &&
                  traj.rows.size() == diag.rows.size();
    for (int c = 0; schema && c < kTrajectoryColumns; ++c) schema = traj.header[c] == kTrajectoryColumnNames[c];
    for (int c = 0; schema && c < kDiagnosticColumns; ++c) schema = diag.header[c] == kDiagnosticColumnNames[c];
    report.checks.push_back({"schema", schema, schema ? "fixed column order present" : "unexpected columns"});
    if (!schema) return report;

    const int cF = column_index("F"), cFh = column_index("F_hat"), cE = column_index("F_err");
    std::size_t bad = 0, first_bad = 0;
    for (std::size_t i = 0; i < traj.rows.size(); ++i) {
        const auto& r = traj.rows[i];
        bool ok = r[cE] == r[cFh] - r[cF] && (i == 0 || r[0] > traj.rows[i - 1][0]);
        for (double v : r) ok = ok && std::isfinite(v);
        if (!ok && bad++ == 0) first_bad = i;
    }
    report.checks.push_back({"definition-consistency", bad == 0,
                             bad == 0 ? "F_err = F_hat - F and increasing t on every row"
                                      : std::to_string(bad) + " inconsistent rows, first at row " +
                                            std::to_string(first_bad + 1)});

    const RunRecord again = run(cfg);
    std::size_t mismatch = again.rows.size() == traj.rows.size() ? 0 : 1;
    std::size_t first_mismatch = 0;
    const std::size_t common = std::min(again.rows.size(), traj.rows.size());
    for (std::size_t i = 0; i < common && mismatch == 0; ++i) {
        for (int c = 0; c < kTrajectoryColumns; ++c) {
            if (column_value(again.rows[i], c) != traj.rows[i][c]) {
                mismatch = 1;
                first_mismatch = i;
                break;
            }
        }
    }
    report.checks.push_back({"reproducibility", mismatch == 0,
                             mismatch == 0 ? "re-run from config.ini matches bitwise"
                                           : "re-run differs (row " + std::to_string(first_mismatch + 1) +
                                                 ", stored " + std::to_string(traj.rows.size()) +
                                                 " rows, re-run " + std::to_string(again.rows.size()) + ")"});

    std::vector<DiagnosticRow> drows;
    for (const auto& r : diag.rows) drows.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
    const Lyapunov l = lyapunov_ratios(drows);
    report.checks.push_back({"lyapunov-rho", l.rho_ratio <= 1.1,
                             "max |rho| / h(p)^2 = " + format_double(l.rho_ratio)});
    const bool window_enforced = cfg.plant.variant == Variant::Spring && !cfg.open_loop;
    report.checks.push_back({"lyapunov-window", !window_enforced || l.window_ratio <= 1.1,
                             "max window / bound = " + format_double(l.window_ratio) + " over " +
                                 std::to_string(l.window_samples) + " samples" +
                                 (window_enforced ? "" : " (informational for this scenario)")});

    std::vector<double> t, err;
    for (const auto& r : traj.rows) {
        t.push_back(r[0]);
        err.push_back(r[cE]);
    }
    if (!tail_applicable(cfg) || t.size() < 2 || t.back() - t.front() < 10.0) {
        report.checks.push_back({"f-hat-tail", true, "not applicable (open loop, noise, or span below 10)"});
    } else {
        const TailReport r = l2_tail(t, err, 5.0);
        report.checks.push_back({"f-hat-tail", r.converging,
                                 "tail fraction over the final 5 time units = " + format_double(r.tail_fraction)});
    }
    return report;
}

}  // namespace adrcwave
