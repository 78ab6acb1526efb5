#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgpv/design.hpp"
#include "sgpv/error.hpp"
#include "sgpv/format.hpp"
#include "sgpv/intervals.hpp"
#include "sgpv/reliability.hpp"
#include "sgpv/screening.hpp"
#include "sgpv/sgpv.hpp"
#include "sgpv/simulate.hpp"

namespace sgpv::cli {

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw command-line values; unset optionals fall back to the config file.
struct Flags {
    std::string input;
    std::optional<std::string> config_path;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::optional<std::string> grid;
    std::optional<std::string> summary;
    std::optional<double> null_point, delta, null_lo, null_hi, alpha, level;
    std::optional<double> n, variance, r, theta, theta1;
    std::optional<std::uint64_t> seed, replicates;
    std::optional<int> digits;
    std::optional<unsigned> threads;
    bool log10 = false;
    bool welch = false;
    bool crosstab = false;
};

// ---------------------------------------------------------------------------
// Configuration

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");

    const std::map<std::string, std::function<void(const json&)>> setters{
        {"null_point", [&](const json& v) { cfg.null_point = v.get<double>(); }},
        {"delta", [&](const json& v) { cfg.delta = v.get<double>(); }},
        {"null_lo", [&](const json& v) { cfg.null_lo = v.get<double>(); }},
        {"null_hi", [&](const json& v) { cfg.null_hi = v.get<double>(); }},
        {"alpha", [&](const json& v) { cfg.alpha = v.get<double>(); }},
        {"level", [&](const json& v) { cfg.level = v.get<double>(); }},
        {"log10", [&](const json& v) { cfg.scale = v.get<bool>() ? Scale::Log10 : Scale::Raw; }},
        {"format", [&](const json& v) { cfg.format = parse_format(v.get<std::string>()); }},
        {"seed", [&](const json& v) { cfg.seed = v.get<std::uint64_t>(); }},
        {"digits", [&](const json& v) { cfg.digits = v.get<int>(); }},
        {"welch", [&](const json& v) { cfg.welch = v.get<bool>(); }},
        {"grid", [&](const json& v) { cfg.grid = v.get<std::string>(); }},
        {"n", [&](const json& v) { cfg.n = v.get<double>(); }},
        {"variance", [&](const json& v) { cfg.variance = v.get<double>(); }},
        {"r", [&](const json& v) { cfg.r = v.get<double>(); }},
        {"theta", [&](const json& v) { cfg.theta = v.get<double>(); }},
        {"theta1", [&](const json& v) { cfg.theta1 = v.get<double>(); }},
        {"replicates", [&](const json& v) {
             if (v.is_number_integer() && v.get<std::int64_t>() < 0) {
                 throw ConfigError("replicates must be nonnegative");
             }
             cfg.replicates = v.get<std::uint64_t>();
         }},
        {"threads", [&](const json& v) { cfg.threads = v.get<unsigned>(); }},
        {"crosstab", [&](const json& v) { cfg.crosstab = v.get<bool>(); }},
        {"summary", [&](const json& v) { cfg.summary_path = v.get<std::string>(); }},
    };
    for (const auto& [key, value] : doc.items()) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
        try {
            it->second(value);
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
}

RunConfig resolve_config(const Flags& f) {
    RunConfig cfg;
    if (f.config_path) apply_config_file(*f.config_path, cfg);

    const auto take = [](auto& dst, const auto& src) {
        if (src) dst = *src;
    };
    take(cfg.null_point, f.null_point);
    take(cfg.delta, f.delta);
    take(cfg.null_lo, f.null_lo);
    take(cfg.null_hi, f.null_hi);
    take(cfg.alpha, f.alpha);
    take(cfg.level, f.level);
    take(cfg.seed, f.seed);
    take(cfg.digits, f.digits);
    take(cfg.grid, f.grid);
    take(cfg.n, f.n);
    take(cfg.variance, f.variance);
    take(cfg.r, f.r);
    take(cfg.theta, f.theta);
    take(cfg.theta1, f.theta1);
    take(cfg.replicates, f.replicates);
    take(cfg.threads, f.threads);
    take(cfg.summary_path, f.summary);
    if (f.format) cfg.format = parse_format(*f.format);
    if (f.log10) cfg.scale = Scale::Log10;
    if (f.welch) cfg.welch = true;
    if (f.crosstab) cfg.crosstab = true;

    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw ConfigError("level must lie in (0, 1)");
    if (cfg.digits < 1 || cfg.digits > 17) throw ConfigError("digits must lie in [1, 17]");
    return cfg;
}

// Null hypothesis for the interval-scoring commands. nullopt when none given.
std::optional<NullSpec> resolve_null(const RunConfig& cfg) {
    const bool point_form = cfg.null_point || cfg.delta;
    const bool bounds_form = cfg.null_lo || cfg.null_hi;
    if (point_form && bounds_form) {
        throw ConfigError("give either --null-point/--delta or --null-lo/--null-hi, not both");
    }
    if (bounds_form) {
        if (!cfg.null_lo || !cfg.null_hi) throw ConfigError("--null-lo and --null-hi must be given together");
        return NullSpec::from_bounds(*cfg.null_lo, *cfg.null_hi);
    }
    if (point_form) {
        if (!cfg.delta) throw ConfigError("--null-point needs --delta");
        return NullSpec::symmetric(cfg.null_point.value_or(0.0), *cfg.delta);
    }
    return std::nullopt;
}

// (theta0, delta) for the design commands; delta = 0 is allowed here.
DesignConfig resolve_design(const RunConfig& cfg) {
    DesignConfig d;
    const bool bounds_form = cfg.null_lo || cfg.null_hi;
    if (bounds_form) {
        if (cfg.null_point || cfg.delta) {
            throw ConfigError("give either --null-point/--delta or --null-lo/--null-hi, not both");
        }
        if (!cfg.null_lo || !cfg.null_hi || !(*cfg.null_lo <= *cfg.null_hi)) {
            throw ConfigError("--null-lo and --null-hi must be given together with lo <= hi");
        }
        d.theta0 = 0.5 * (*cfg.null_lo + *cfg.null_hi);
        d.delta = 0.5 * (*cfg.null_hi - *cfg.null_lo);
    } else {
        if (!cfg.delta) throw ConfigError("design commands need --delta (or --null-lo/--null-hi)");
        d.theta0 = cfg.null_point.value_or(0.0);
        d.delta = *cfg.delta;
    }
    d.n = cfg.n;
    d.variance = cfg.variance;
    d.alpha = cfg.alpha;
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// CSV input

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    std::optional<std::size_t> column(std::string_view name) const {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    }
    bool has(std::initializer_list<std::string_view> names) const {
        return std::all_of(names.begin(), names.end(), [&](auto n) { return column(n).has_value(); });
    }
};

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " fields, found " +
                             std::to_string(fields.size()));
        }
        table.rows.push_back({line_no, std::move(fields)});
    }
    return table;
}

double parse_number(const CsvRow& row, std::size_t col, const CsvTable& table) {
    const std::string& text = row.fields[col];
    const auto fail = [&] {
        return InputError("line " + std::to_string(row.line) + ": column '" + table.header[col] +
                          "': '" + text + "' is not a number");
    };
    if (text.empty()) throw fail();
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || std::isnan(v)) throw fail();
    return v;
}

std::optional<double> parse_optional_number(const CsvRow& row, std::optional<std::size_t> col,
                                            const CsvTable& table) {
    if (!col || row.fields[*col].empty()) return std::nullopt;
    return parse_number(row, *col, table);
}

std::string row_id(const CsvRow& row, const CsvTable& table, std::size_t index) {
    if (auto c = table.column("id")) return row.fields[*c];
    return std::to_string(index + 1);
}

// Runs `body`, turning library errors into line-tagged input errors.
template <typename Body>
auto at_line(const CsvRow& row, Body body) {
    try {
        return body();
    } catch (const Error& e) {
        throw InputError("line " + std::to_string(row.line) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Output helpers

struct Output {
    std::ofstream file;
    std::ostream* stream;
};

std::ostream& open_output(const std::optional<std::string>& path, std::ostream& fallback, Output& holder) {
    holder.stream = &fallback;
    if (path) {
        holder.file.open(*path);
        if (!holder.file) throw InputError("cannot open output file '" + *path + "'");
        holder.stream = &holder.file;
    }
    return *holder.stream;
}

json number(double v, int digits) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::stod(format_number(v, digits));
}

json optional_number(const std::optional<double>& v, int digits) {
    return v ? number(*v, digits) : json(nullptr);
}

// ---------------------------------------------------------------------------
// Commands

int cmd_compute(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    const auto h0 = resolve_null(cfg);
    if (!h0) throw ConfigError("compute needs a null: --null-point/--delta or --null-lo/--null-hi");
    const auto table = read_csv(flags.input);

    const bool interval_form = table.has({"lo", "hi"});
    const bool z_form = table.has({"estimate", "se"});
    if (!table.header.empty() && !interval_form && !z_form) {
        throw InputError("line 1: expected columns lo,hi or estimate,se");
    }

    json rows = json::array();
    std::ostringstream csv;
    const int dg = cfg.digits;
    csv << "id,lo,hi,p_delta,classification,correction_applied,delta_gap,max_p,traditional_p\n";
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        std::optional<double> estimate;
        std::optional<double> se;
        auto interval = at_line(row, [&] {
            if (interval_form) {
                return ExtendedInterval(parse_number(row, *table.column("lo"), table),
                                        parse_number(row, *table.column("hi"), table));
            }
            estimate = parse_number(row, *table.column("estimate"), table);
            se = parse_number(row, *table.column("se"), table);
            return z_interval(*estimate, *se, cfg.level);
        });
        if (cfg.scale == Scale::Log10) interval = at_line(row, [&] { return log10_transform(interval); });
        const auto result = at_line(row, [&] { return second_gen_p(interval, *h0); });

        std::optional<double> max_p;
        std::optional<double> trad_p;
        if (estimate && cfg.scale == Scale::Raw) {
            max_p = max_p_over_null(*estimate, *se, *h0);
            trad_p = traditional_p(*estimate, *se, h0->point_null());
        }

        const std::string id = row_id(row, table, k);
        csv << id << ',' << format_exact(interval.lo()) << ',' << format_exact(interval.hi()) << ','
            << format_number(result.p_delta, dg) << ',' << to_string(result.classification) << ','
            << (result.correction_applied ? "true" : "false") << ','
            << (result.delta_gap ? format_number(*result.delta_gap, dg) : "") << ','
            << (max_p ? format_number(*max_p, dg) : "") << ','
            << (trad_p ? format_number(*trad_p, dg) : "") << '\n';
        rows.push_back({{"id", id},
                        {"lo", interval.lo()},
                        {"hi", interval.hi()},
                        {"p_delta", number(result.p_delta, dg)},
                        {"classification", to_string(result.classification)},
                        {"correction_applied", result.correction_applied},
                        {"delta_gap", optional_number(result.delta_gap, dg)},
                        {"max_p", optional_number(max_p, dg)},
                        {"traditional_p", optional_number(trad_p, dg)}});
    }

    Output holder;
    auto& os = open_output(flags.out_path, out, holder);
    if (cfg.format == OutputFormat::Json) {
        os << rows.dump(2) << '\n';
    } else {
        os << csv.str();
    }
    return kExitOk;
}

std::vector<double> require_grid(const RunConfig& cfg) {
    if (!cfg.grid) throw ConfigError("--grid is required");
    return parse_grid(*cfg.grid);
}

int cmd_design(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    const auto design = resolve_design(cfg);
    const auto grid = require_grid(cfg);
    const auto rows = emit_power_curve(design, grid);

    Output holder;
    auto& os = open_output(flags.out_path, out, holder);
    if (cfg.format == OutputFormat::Json) {
        json doc = json::array();
        for (const auto& r : rows) {
            doc.push_back({{"theta", number(r.theta, cfg.digits)},
                           {"p_alt", number(r.probs.p_alt, cfg.digits)},
                           {"p_null", number(r.probs.p_null, cfg.digits)},
                           {"p_inconclusive", number(r.probs.p_inconclusive, cfg.digits)}});
        }
        os << doc.dump(2) << '\n';
    } else {
        write_power_curve_csv(os, rows, cfg.digits);
    }
    return kExitOk;
}

int cmd_reliability(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    const auto design = resolve_design(cfg);
    const PriorOdds odds(cfg.r);
    const auto grid = require_grid(cfg);
    const auto rows = emit_reliability_curve(design, odds, grid);

    Output holder;
    auto& os = open_output(flags.out_path, out, holder);
    if (cfg.format == OutputFormat::Json) {
        json doc = json::array();
        for (const auto& r : rows) {
            doc.push_back({{"theta1", number(r.theta1, cfg.digits)},
                           {"fdr_sgpv", number(r.fdr_sgpv, cfg.digits)},
                           {"fcr_sgpv", optional_number(r.fcr_sgpv, cfg.digits)},
                           {"fdr_test", number(r.fdr_test, cfg.digits)},
                           {"fnr_test", number(r.fnr_test, cfg.digits)}});
        }
        os << doc.dump(2) << '\n';
    } else {
        write_reliability_curve_csv(os, rows, cfg.digits);
    }
    return kExitOk;
}

json summary_json(const ScreenReport& report, const std::optional<CrossTab>& tab, const NullSpec& h0) {
    const auto& s = report.summary;
    json doc{{"method", report.method},
             {"alpha", report.alpha},
             {"null", {{"lo", h0.lo()}, {"hi", h0.hi()}, {"delta", h0.delta()}}},
             {"total", s.total},
             {"alternative_compatible", s.alternative},
             {"null_compatible", s.null},
             {"inconclusive", s.inconclusive},
             {"flagged", s.flagged}};
    const auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
    doc["raw_significant"] = opt(s.raw_significant);
    doc["bonferroni_significant"] = opt(s.bonferroni_significant);
    doc["bh_significant"] = opt(s.bh_significant);
    if (tab) {
        doc["crosstab"] = {{"zero_significant", tab->zero_significant},
                           {"zero_not_significant", tab->zero_not_significant},
                           {"positive_significant", tab->positive_significant},
                           {"positive_not_significant", tab->positive_not_significant},
                           {"excluded", tab->excluded}};
    }
    return doc;
}

int cmd_screen(const RunConfig& cfg, const Flags& flags, std::ostream& out, std::ostream& err) {
    const NullSpec h0 = resolve_null(cfg).value_or(fold_change_null(2.0));
    const auto table = read_csv(flags.input);
    const bool grouped = table.has({"n1", "mean1", "sd1", "n2", "mean2", "sd2"});
    if (!grouped && !table.has({"lo", "hi"})) {
        throw InputError("line 1: expected columns id,estimate,lo,hi[,p_value] or id,n1,mean1,sd1,n2,mean2,sd2");
    }
    const auto method = cfg.welch ? TwoSampleMethod::Welch : TwoSampleMethod::Pooled;

    std::vector<StudyRow> rows;
    rows.reserve(table.rows.size());
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        StudyRow study;
        study.id = row_id(row, table, k);
        if (grouped) {
            const auto group = [&](const char* n, const char* m, const char* s) {
                const double count = parse_number(row, *table.column(n), table);
                if (!(count >= 0.0) || count != std::floor(count)) {
                    throw InputError("line " + std::to_string(row.line) + ": column '" + n +
                                     "' must be a whole number");
                }
                return GroupSummary{static_cast<std::size_t>(count), parse_number(row, *table.column(m), table),
                                    parse_number(row, *table.column(s), table)};
            };
            const auto a = group("n1", "mean1", "sd1");
            const auto b = group("n2", "mean2", "sd2");
            const auto t = at_line(row, [&] { return two_sample_ci(a, b, cfg.level, method); });
            study.estimate = t.estimate;
            study.interval = t.interval;
            study.p_value = t.p_value;
        } else {
            const double lo = parse_number(row, *table.column("lo"), table);
            const double hi = parse_number(row, *table.column("hi"), table);
            study.interval = at_line(row, [&] { return ExtendedInterval(lo, hi); });
            const auto est = parse_optional_number(row, table.column("estimate"), table);
            study.estimate = est.value_or(0.5 * (lo + hi));
            study.p_value = parse_optional_number(row, table.column("p_value"), table);
            if (study.p_value && !(*study.p_value >= 0.0 && *study.p_value <= 1.0)) {
                throw InputError("line " + std::to_string(row.line) + ": p_value must lie in [0, 1]");
            }
            if (cfg.scale == Scale::Log10) {
                study.interval = at_line(row, [&] { return log10_transform(study.interval); });
                study.estimate = std::log10(study.estimate);
            }
        }
        rows.push_back(std::move(study));
    }

    const bool all_p = std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.p_value.has_value(); });
    if (cfg.crosstab && !all_p) throw ConfigError("--crosstab needs a p_value for every row");

    ScreenReport report;
    if (rows.empty()) {
        report.alpha = cfg.alpha;
    } else {
        report = batch_sgpv(rows, h0, cfg.alpha);
    }
    report.method = grouped ? std::string(to_string(method)) : "supplied";

    std::optional<CrossTab> tab;
    if (cfg.crosstab) tab = cross_tab(report, cfg.alpha);
    const json summary = summary_json(report, tab, h0);

    Output holder;
    auto& os = open_output(flags.out_path, out, holder);
    if (cfg.format == OutputFormat::Json) {
        const auto order = rank_order(report);
        std::vector<std::size_t> rank(report.rows.size());
        for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;
        json list = json::array();
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& r = report.rows[i];
            list.push_back({{"id", r.id},
                            {"p_delta", r.result ? number(r.result->p_delta, cfg.digits) : json(nullptr)},
                            {"classification", r.result ? std::string(to_string(r.result->classification)) : r.flag},
                            {"delta_gap", r.result ? optional_number(r.result->delta_gap, cfg.digits) : json(nullptr)},
                            {"p_raw", optional_number(r.p_raw, cfg.digits)},
                            {"p_bonferroni", optional_number(r.p_bonferroni, cfg.digits)},
                            {"q_bh", optional_number(r.q_bh, cfg.digits)},
                            {"rank", rank[i]}});
        }
        os << json{{"rows", list}, {"summary", summary}}.dump(2) << '\n';
    } else {
        write_screen_report_csv(os, report, cfg.digits);
    }

    if (cfg.summary_path) {
        std::ofstream s(*cfg.summary_path);
        if (!s) throw InputError("cannot open summary file '" + *cfg.summary_path + "'");
        s << summary.dump(2) << '\n';
    } else if (cfg.crosstab && cfg.format == OutputFormat::Csv) {
        err << summary.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_track(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    const auto h0 = resolve_null(cfg);
    if (!h0) throw ConfigError("track needs a null: --null-point/--delta or --null-lo/--null-hi");
    const auto table = read_csv(flags.input);
    if (!table.header.empty() && !table.has({"t", "lo", "hi"})) {
        throw InputError("line 1: expected columns t,lo,hi");
    }
    std::vector<TrackInput> series;
    for (const auto& row : table.rows) {
        const double t = parse_number(row, *table.column("t"), table);
        auto interval = at_line(row, [&] {
            return ExtendedInterval(parse_number(row, *table.column("lo"), table),
                                    parse_number(row, *table.column("hi"), table));
        });
        if (cfg.scale == Scale::Log10) interval = at_line(row, [&] { return log10_transform(interval); });
        if (!series.empty() && !(t > series.back().t)) {
            throw InputError("line " + std::to_string(row.line) + ": t must be strictly increasing");
        }
        series.push_back({t, interval});
    }

    Output holder;
    auto& os = open_output(flags.out_path, out, holder);
    if (series.empty()) {
        if (cfg.format == OutputFormat::Json) {
            os << "[]\n";
        } else {
            write_track_csv(os, {}, cfg.digits);
        }
        return kExitOk;
    }
    const auto points = [&] {
        try {
            return pointwise_track(series, *h0);
        } catch (const Error& e) {
            throw InputError(e.what());
        }
    }();
    if (cfg.format == OutputFormat::Json) {
        json doc = json::array();
        for (const auto& p : points) {
            doc.push_back({{"t", number(p.t, cfg.digits)},
                           {"p_delta", number(p.p_delta, cfg.digits)},
                           {"classification", to_string(p.classification)},
                           {"grey_level", optional_number(p.grey_level, cfg.digits)}});
        }
        os << doc.dump(2) << '\n';
    } else {
        write_track_csv(os, points, cfg.digits);
    }
    return kExitOk;
}

json z_score(double empirical, double closed_form, std::uint64_t replicates) {
    const double se = std::sqrt(closed_form * (1.0 - closed_form) / static_cast<double>(replicates));
    if (se == 0.0) return empirical == closed_form ? json(0.0) : json(nullptr);
    return (empirical - closed_form) / se;
}

int cmd_simulate(const RunConfig& cfg, const Flags& flags, std::ostream& out) {
    const auto design = resolve_design(cfg);
    if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
    SimConfig sim{design, cfg.theta.value_or(design.theta0), cfg.replicates, cfg.seed.value_or(0)};

    const auto result = simulate_outcomes(sim, cfg.threads);
    const auto closed = outcome_probs(sim.theta, design);
    const int dg = cfg.digits;

    json doc;
    doc["config"] = {{"theta0", design.theta0}, {"delta", design.delta}, {"n", design.n},
                     {"variance", design.variance}, {"alpha", design.alpha}, {"theta", sim.theta},
                     {"replicates", sim.replicates}, {"seed", sim.seed}};
    doc["counts"] = {{"p_alt", result.counts.alt},
                     {"p_null", result.counts.null},
                     {"p_inconclusive", result.counts.inconclusive}};
    doc["empirical"] = {{"p_alt", number(result.empirical.p_alt, dg)},
                        {"p_null", number(result.empirical.p_null, dg)},
                        {"p_inconclusive", number(result.empirical.p_inconclusive, dg)}};
    doc["closed_form"] = {{"p_alt", number(closed.p_alt, dg)},
                          {"p_null", number(closed.p_null, dg)},
                          {"p_inconclusive", number(closed.p_inconclusive, dg)}};
    doc["z_scores"] = {{"p_alt", z_score(result.empirical.p_alt, closed.p_alt, sim.replicates)},
                       {"p_null", z_score(result.empirical.p_null, closed.p_null, sim.replicates)},
                       {"p_inconclusive",
                        z_score(result.empirical.p_inconclusive, closed.p_inconclusive, sim.replicates)}};

    if (cfg.theta1) {
        const PriorOdds odds(cfg.r);
        const auto rel = simulate_reliability(sim, odds, *cfg.theta1, cfg.threads);
        const double fdr = fdr_sgpv(*cfg.theta1, design, odds);
        const auto fcr = fcr_sgpv(*cfg.theta1, design, odds);
        json r{{"theta1", *cfg.theta1}, {"r", cfg.r}};
        r["empirical"] = {{"fdr", optional_number(rel.fdr, dg)}, {"fcr", optional_number(rel.fcr, dg)}};
        r["closed_form"] = {{"fdr", number(fdr, dg)}, {"fcr", optional_number(fcr, dg)}};
        r["z_scores"] = {{"fdr", rel.fdr ? z_score(*rel.fdr, fdr, rel.zero_events) : json(nullptr)},
                         {"fcr", rel.fcr && fcr ? z_score(*rel.fcr, *fcr, rel.one_events) : json(nullptr)}};
        r["events"] = {{"p_delta_zero", rel.zero_events}, {"p_delta_one", rel.one_events}};
        doc["reliability"] = r;
    }

    Output holder;
    auto& os = open_output(flags.out_path, out, holder);
    os << doc.dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument wiring

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config_path, "JSON run configuration; flags override it");
    app->add_option("--out", f.out_path, "Output file (default: stdout)");
    app->add_option("--format", f.format, "Output format: csv or json");
    app->add_option("--null-point", f.null_point, "Centre theta0 of a symmetric null");
    app->add_option("--delta", f.delta, "Half-width delta of a symmetric null");
    app->add_option("--null-lo", f.null_lo, "Lower bound of the null interval");
    app->add_option("--null-hi", f.null_hi, "Upper bound of the null interval");
    app->add_option("--alpha", f.alpha, "Error rate alpha (default 0.05)");
    app->add_option("--level", f.level, "Confidence level of constructed intervals (default 0.95)");
    app->add_flag("--log10", f.log10, "Log10-transform raw-scale intervals at ingestion");
    app->add_option("--seed", f.seed, "Random seed");
    app->add_option("--digits", f.digits, "Significant digits in output (default 6)");
}

void add_design(CLI::App* app, Flags& f) {
    app->add_option("--grid", f.grid, "theta grid: start:stop:step or a,b,c");
    app->add_option("--n", f.n, "Sample size n");
    app->add_option("--variance", f.variance, "V, the variance of sqrt(n)(theta_hat - theta)");
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    const auto bad = [&] { return Error(Errc::InvalidConfig, "malformed grid '" + spec + "'"); };
    const auto to_double = [&](std::string s) {
        s = trim(std::move(s));
        if (s.empty()) throw bad();
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || !std::isfinite(v)) throw bad();
        return v;
    };

    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() != 3 || spec.back() == ':') throw bad();
        const double start = to_double(parts[0]);
        const double stop = to_double(parts[1]);
        const double step = to_double(parts[2]);
        if (!(step > 0.0) || stop < start) throw bad();
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 10'000'000) throw bad();
        for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
        return grid;
    }
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) grid.push_back(to_double(part));
    if (grid.empty() || spec.back() == ',') throw bad();
    return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Second-generation p-values: interval nulls, design properties and screening", "sgpv"};
    app.require_subcommand(1);
    Flags f;

    auto* compute = app.add_subcommand("compute", "p_delta for each interval (columns lo,hi or estimate,se)");
    compute->add_option("input", f.input, "Input CSV")->required();
    add_common(compute, f);

    auto* design = app.add_subcommand("design", "Outcome probabilities over a theta grid");
    add_common(design, f);
    add_design(design, f);

    auto* reliability = app.add_subcommand("reliability", "FDR/FCR curves over a theta1 grid");
    add_common(reliability, f);
    add_design(reliability, f);
    reliability->add_option("--r", f.r, "Prior odds P(H1)/P(H0) (default 1)");

    auto* screen = app.add_subcommand("screen", "Batch screening with Bonferroni/BH comparators");
    screen->add_option("input", f.input, "Input CSV")->required();
    add_common(screen, f);
    screen->add_flag("--welch", f.welch, "Welch intervals for the two-group input form");
    screen->add_flag("--crosstab", f.crosstab, "Cross-tabulate p_delta = 0 against Bonferroni");
    screen->add_option("--summary", f.summary, "Write the JSON summary to this file");

    auto* track = app.add_subcommand("track", "Pointwise p_delta along an interval series (t,lo,hi)");
    track->add_option("input", f.input, "Input CSV")->required();
    add_common(track, f);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the outcome probabilities");
    add_common(simulate, f);
    add_design(simulate, f);
    simulate->add_option("--theta", f.theta, "Data-generating theta (default theta0)");
    simulate->add_option("--replicates", f.replicates, "Number of replicates (default 100000)");
    simulate->add_option("--threads", f.threads, "Worker threads (default: all cores)");
    simulate->add_option("--theta1", f.theta1, "Also simulate FDR/FCR against this alternative");
    simulate->add_option("--r", f.r, "Prior odds P(H1)/P(H0) (default 1)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        const RunConfig cfg = resolve_config(f);
        if (compute->parsed()) return cmd_compute(cfg, f, out);
        if (design->parsed()) return cmd_design(cfg, f, out);
        if (reliability->parsed()) return cmd_reliability(cfg, f, out);
        if (screen->parsed()) return cmd_screen(cfg, f, out, err);
        if (track->parsed()) return cmd_track(cfg, f, out);
        if (simulate->parsed()) return cmd_simulate(cfg, f, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
            case Errc::InvalidConfig:
            case Errc::InvalidProbability:
            case Errc::DegenerateDesign:
            case Errc::MissingComparator: return kExitConfig;
            default: return kExitInput;
        }
    }
    return kExitConfig;
}

}  // namespace sgpv::cli
