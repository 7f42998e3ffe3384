#include "cli.hpp"

#include "csv.hpp"

#include "causal/codependence.hpp"
#include "causal/decomposition.hpp"
#include "causal/error.hpp"
#include "causal/finance.hpp"
#include "causal/parallel.hpp"
#include "causal/synthetic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>

#ifndef CAUSAL_VERSION
#define CAUSAL_VERSION "0.0.0"
#endif

namespace causal::cli
{

namespace
{

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Options
// ---------------------------------------------------------------------------

struct MeasureFlags
{
    std::size_t bins = 8;
    std::size_t surrogates = 50;
    std::uint64_t seed = 0;
    std::size_t kappa = 2;
    std::size_t tau = 1;
    bool auto_embedding = false;
    std::size_t threads = 1;

    MeasureOptions options(std::size_t surrogate_threads) const
    {
        MeasureOptions o;
        o.histogram.bins_per_dim = bins;
        o.surrogate.realizations = surrogates;
        o.surrogate.seed = seed;
        o.surrogate.threads = surrogate_threads;
        o.ccm.embedding = EmbeddingConfig{kappa, tau};
        o.auto_embedding = auto_embedding;
        return o;
    }
};

CLI::Validator at_least_one()
{
    return CLI::Validator(
        [](std::string &value) {
            const bool digits = value.find_first_not_of("0123456789") == std::string::npos;
            const bool nonzero = value.find_first_not_of('0') != std::string::npos;
            return digits && nonzero ? std::string{}
                                     : "must be a whole number of at least 1, got '" + value + "'";
        },
        "POSITIVE");
}

void add_measure_flags(CLI::App *sub, MeasureFlags &f)
{
    sub->add_option("--bins", f.bins, "Histogram bins per dimension for transfer entropy")
        ->check(CLI::Range(2, 1 << 16));
    sub->add_option("--surrogates", f.surrogates, "Surrogate realizations per window")->check(at_least_one());
    sub->add_option("--seed", f.seed, "Seed of the surrogate phase stream");
    sub->add_option("--kappa", f.kappa, "CCM embedding dimension")->check(at_least_one());
    sub->add_option("--tau", f.tau, "CCM embedding delay")->check(at_least_one());
    sub->add_flag("--auto-embedding", f.auto_embedding,
                  "Pick tau (mutual information) and kappa (false nearest neighbours) per window");
    sub->add_option("--threads", f.threads, "Worker threads")->check(at_least_one());
}

struct IoFlags
{
    std::string input;
    std::string output_dir = ".";
};

void add_io_flags(CLI::App *sub, IoFlags &f)
{
    sub->add_option("--input", f.input, "Input CSV (optional 'date' column, one column per asset)")
        ->required();
    sub->add_option("--output-dir", f.output_dir, "Directory for the output files");
}

CodependenceKind to_kind(const std::string &name)
{
    const auto kind = parse_codependence(name);
    if (!kind) {
        fail(Errc::InvalidArgument, "unknown measure '" + name + "'");
    }
    return *kind;
}

std::vector<CodependenceKind> to_kinds(const std::vector<std::string> &names,
                                       const std::vector<CodependenceKind> &all)
{
    std::vector<CodependenceKind> out;
    for (const auto &name : names) {
        if (name == "all") {
            for (auto k : all) {
                if (std::find(out.begin(), out.end(), k) == out.end()) {
                    out.push_back(k);
                }
            }
            continue;
        }
        const auto k = to_kind(name);
        if (std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
        }
    }
    return out;
}

CLI::Validator measure_name_check()
{
    return CLI::Validator(
        [](std::string &value) {
            return value == "all" || parse_codependence(value) ? std::string{}
                                                                : "unknown measure '" + value + "'";
        },
        "MEASURE");
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

class OutputFile
{
public:
    OutputFile(const std::string &dir, const std::string &name) : name_(name)
    {
        fs::create_directories(dir);
        const fs::path path = fs::path(dir) / name;
        stream_.open(path, std::ios::binary | std::ios::trunc);
        if (!stream_) {
            fail(Errc::Io, "cannot write '" + path.string() + "'");
        }
    }

    std::ostream &stream() { return stream_; }
    const std::string &name() const { return name_; }

    void close()
    {
        stream_.close();
        if (!stream_) {
            fail(Errc::Io, "failed writing '" + name_ + "'");
        }
    }

private:
    std::string name_;
    std::ofstream stream_;
};

/// Records every option of the subcommand (explicit value or default) so a
/// run can be repeated from the manifest alone. Contains no timestamps or
/// absolute output paths, so identical runs give identical manifests.
void write_manifest(const std::string &dir, const CLI::App &sub, const std::vector<std::string> &outputs,
                    const std::string &status)
{
    nlohmann::ordered_json manifest;
    manifest["tool"] = "causal";
    manifest["version"] = CAUSAL_VERSION;
    manifest["command"] = sub.get_name();
    nlohmann::ordered_json options = nlohmann::ordered_json::object();
    for (const CLI::Option *opt : sub.get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" ||
            opt->get_lnames().front() == "output-dir") {
            continue;
        }
        std::string value;
        if (opt->count() > 0) {
            const auto &results = opt->results();
            for (std::size_t i = 0; i < results.size(); ++i) {
                value += (i ? "," : "") + results[i];
            }
        } else {
            value = opt->get_default_str();
            if (value.empty() && opt->get_expected_min() == 0) {
                value = "false";
            }
        }
        options[opt->get_lnames().front()] = value;
    }
    manifest["options"] = options;
    manifest["outputs"] = outputs;
    manifest["status"] = status;
    OutputFile file(dir, "manifest.json");
    file.stream() << manifest.dump(2) << '\n';
    file.close();
}

struct Prepared
{
    CsvTable table;
    std::vector<TimeSeries> data; ///< log returns, or the raw columns
    std::size_t row_offset = 1;   ///< data index + row_offset = input row index
};

Prepared prepare(const std::string &input, bool raw)
{
    Prepared p;
    p.table = ingest_csv(input);
    p.row_offset = raw ? 0 : 1;
    for (const auto &s : p.table.series) {
        if (raw) {
            p.data.push_back(s);
        } else {
            try {
                p.data.push_back(log_returns(s));
            } catch (const Error &e) {
                throw e.with_context("column '" + s.label() + "'");
            }
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalysisFlags
{
    IoFlags io;
    MeasureFlags measure;
    std::vector<std::string> measures{"correlation", "te", "ccm"};
    std::size_t window_len = 1000;
    std::size_t stride = 20;
    bool raw = false;
};

void add_analysis_flags(CLI::App *sub, AnalysisFlags &f, const std::string &measures_help)
{
    add_io_flags(sub, f.io);
    sub->add_option("--measures", f.measures, measures_help)->delimiter(',')->check(measure_name_check());
    sub->add_option("--window-len", f.window_len, "Rolling window length (samples)")->check(at_least_one());
    sub->add_option("--stride", f.stride, "Rolling window stride (samples)")->check(at_least_one());
    sub->add_flag("--raw", f.raw, "Analyze the columns as given instead of their log returns");
    add_measure_flags(sub, f.measure);
}

struct AnalysisRow
{
    std::size_t window_end = 0; ///< input row index (0-based, header excluded) of the window's last sample
    std::string asset_a;
    std::string asset_b;
    std::string direction; ///< "a->b", "b->a" or "undirected"
    std::string measure;
    double value = 0.0;
    std::string error; ///< empty on success
};

std::vector<AnalysisRow> analyze_series(const Prepared &p, const AnalysisFlags &f,
                                        const std::vector<CodependenceKind> &kinds)
{
    const RollingConfig rolling{f.window_len, f.stride};
    const std::size_t len = p.data.front().size();
    rolling.validate(len);
    const std::size_t count = window_count(len, rolling);
    const MeasureOptions options = f.measure.options(1);

    std::vector<AnalysisRow> rows;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        for (std::size_t j = i + 1; j < p.data.size(); ++j) {
            for (const CodependenceKind kind : kinds) {
                const BivariateMeasure measure = make_measure(kind, options);
                const std::vector<std::string> directions =
                    is_directed(kind) ? std::vector<std::string>{"a->b", "b->a"}
                                      : std::vector<std::string>{"undirected"};
                for (const auto &direction : directions) {
                    const bool backward = direction == "b->a";
                    std::vector<double> values(count, 0.0);
                    std::vector<std::string> errors(count);
                    detail::parallel_for(count, f.measure.threads, [&](std::size_t w) {
                        const auto a = p.data[i].values().subspan(w * f.stride, f.window_len);
                        const auto b = p.data[j].values().subspan(w * f.stride, f.window_len);
                        try {
                            values[w] = backward ? measure(b, a) : measure(a, b);
                        } catch (const Error &e) {
                            errors[w] = e.what();
                        }
                    });
                    for (std::size_t w = 0; w < count; ++w) {
                        rows.push_back({w * f.stride + f.window_len - 1 + p.row_offset, p.data[i].label(),
                                        p.data[j].label(), direction, std::string(codependence_name(kind)),
                                        values[w], errors[w]});
                    }
                }
            }
        }
    }
    return rows;
}

int cmd_analyze(const CLI::App &sub, const AnalysisFlags &f, std::ostream &out)
{
    const Prepared p = prepare(f.io.input, f.raw);
    const auto kinds = to_kinds(f.measures, all_codependence_kinds());
    const auto rows = analyze_series(p, f, kinds);

    OutputFile file(f.io.output_dir, "analyze.csv");
    auto &os = file.stream();
    os << "window_end,date,asset_a,asset_b,direction,measure,value,error\n";
    std::size_t failed = 0;
    for (const auto &r : rows) {
        os << r.window_end << ',' << csv_safe(p.table.date(r.window_end)) << ',' << r.asset_a << ','
           << r.asset_b << ',' << r.direction << ',' << r.measure << ','
           << (r.error.empty() ? format_double(r.value) : std::string{}) << ',' << csv_safe(r.error) << '\n';
        failed += !r.error.empty();
    }
    file.close();
    const std::string status = failed ? "partial" : "ok";
    write_manifest(f.io.output_dir, sub, {file.name()}, status);
    out << "analyze: " << rows.size() << " rows, " << failed << " failed\n";
    return failed ? exit_partial : exit_success;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeFlags
{
    AnalysisFlags analysis;
    std::size_t second_window = 0;
    std::size_t second_stride = 1;
};

CodependenceKind surrogate_of(CodependenceKind base)
{
    switch (base) {
    case CodependenceKind::te:
        return CodependenceKind::surrogate_te;
    case CodependenceKind::ccm:
        return CodependenceKind::surrogate_ccm;
    default:
        return CodependenceKind::surrogate_correlation;
    }
}

using SeriesKey = std::tuple<std::string, std::string, std::string, std::string>;

bool is_analysis_output(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    std::string line;
    if (!in || !std::getline(in, line)) {
        return false;
    }
    const auto header = split_line(line);
    return std::find(header.begin(), header.end(), "measure") != header.end() &&
           std::find(header.begin(), header.end(), "value") != header.end() &&
           std::find(header.begin(), header.end(), "window_end") != header.end();
}

int cmd_decompose(const CLI::App &sub, const DecomposeFlags &f, std::ostream &out)
{
    std::vector<CodependenceKind> bases;
    for (const auto k : to_kinds(f.analysis.measures, {CodependenceKind::correlation, CodependenceKind::te,
                                                        CodependenceKind::ccm})) {
        if (std::find(bases.begin(), bases.end(), base_kind(k)) == bases.end()) {
            bases.push_back(base_kind(k));
        }
    }

    // Measure values keyed by (asset_a, asset_b, direction, measure), then window end.
    std::map<SeriesKey, std::map<std::size_t, double>> series;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::map<std::size_t, std::string> dates;
    auto add = [&](const std::string &a, const std::string &b, const std::string &dir, const std::string &m,
                   std::size_t end, std::optional<double> value) {
        const std::pair<std::string, std::string> pair{a, b};
        if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) {
            pairs.push_back(pair);
        }
        auto &s = series[{a, b, dir, m}];
        if (value) {
            s[end] = *value;
        }
    };

    if (is_analysis_output(f.analysis.io.input)) {
        const TextTable t = read_text_table(f.analysis.io.input);
        const std::size_t c_end = t.column("window_end");
        const std::size_t c_date = t.column("date");
        const std::size_t c_a = t.column("asset_a");
        const std::size_t c_b = t.column("asset_b");
        const std::size_t c_dir = t.column("direction");
        const std::size_t c_m = t.column("measure");
        const std::size_t c_v = t.column("value");
        if (std::max({c_a, c_b, c_dir, c_m}) >= t.header.size()) {
            fail(Errc::ParseError, "analysis file lacks asset_a, asset_b, direction or measure");
        }
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto &row = t.rows[r];
            std::size_t end = 0;
            std::optional<double> value;
            const auto [pe, ee] = std::from_chars(row[c_end].data(), row[c_end].data() + row[c_end].size(), end);
            if (ee != std::errc{} || pe != row[c_end].data() + row[c_end].size()) {
                fail(Errc::ParseError, "row " + std::to_string(r + 2) + ": bad window_end");
            }
            if (!row[c_v].empty()) {
                double v = 0.0;
                const auto [pv, ev] = std::from_chars(row[c_v].data(), row[c_v].data() + row[c_v].size(), v);
                if (ev != std::errc{} || pv != row[c_v].data() + row[c_v].size()) {
                    fail(Errc::ParseError, "row " + std::to_string(r + 2) + ": bad value");
                }
                value = v;
            }
            if (c_date < t.header.size()) {
                dates[end] = row[c_date];
            }
            add(row[c_a], row[c_b], row[c_dir], row[c_m], end, value);
        }
    } else {
        const Prepared p = prepare(f.analysis.io.input, f.analysis.raw);
        std::vector<CodependenceKind> kinds{CodependenceKind::correlation};
        for (const auto base : bases) {
            for (const auto k : {base, surrogate_of(base)}) {
                if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) {
                    kinds.push_back(k);
                }
            }
        }
        for (const auto &r : analyze_series(p, f.analysis, kinds)) {
            dates[r.window_end] = p.table.date(r.window_end);
            add(r.asset_a, r.asset_b, r.direction, r.measure, r.window_end,
                r.error.empty() ? std::optional<double>(r.value) : std::nullopt);
        }
    }

    OutputFile file(f.analysis.io.output_dir, "decompose.csv");
    auto &os = file.stream();
    os << "window_end,date,asset_a,asset_b,direction,measure,linear_fraction,nonlinear_fraction,fallacy,"
          "fallacy_linear,error\n";
    std::size_t written = 0;
    std::size_t failed = 0;
    auto emit_error = [&](const std::string &a, const std::string &b, const std::string &dir,
                          const std::string &m, const std::string &msg) {
        os << ",," << a << ',' << b << ',' << dir << ',' << m << ",,,,," << csv_safe(msg) << '\n';
        ++failed;
        ++written;
    };
    auto emit = [&](std::optional<std::size_t> end, const DecompositionReport &r, const std::string &dir) {
        os << (end ? std::to_string(*end) : std::string{}) << ','
           << (end && dates.count(*end) ? csv_safe(dates[*end]) : std::string{}) << ',' << r.asset_a << ','
           << r.asset_b << ',' << dir << ',' << r.measure_name << ',' << format_double(r.linear_fraction) << ','
           << format_double(r.nonlinear_fraction) << ',' << format_double(r.fallacy) << ','
           << format_double(r.fallacy_linear) << ",\n";
        ++written;
    };

    const std::string corr_name(codependence_name(CodependenceKind::correlation));
    for (const auto &[a, b] : pairs) {
        for (const auto base : bases) {
            const std::string name(codependence_name(base));
            const std::string sname(codependence_name(surrogate_of(base)));
            const std::vector<std::string> directions =
                is_directed(base) ? std::vector<std::string>{"a->b", "b->a"} : std::vector<std::string>{"undirected"};
            for (const auto &dir : directions) {
                const auto psi_it = series.find({a, b, dir, name});
                if (psi_it == series.end()) {
                    continue;
                }
                const auto sur_it = series.find({a, b, dir, sname});
                const auto rho_it = series.find({a, b, "undirected", corr_name});
                if (base == CodependenceKind::correlation && sur_it == series.end()) {
                    // Without its surrogate the correlation only serves as the reference series.
                    continue;
                }
                if (sur_it == series.end() || rho_it == series.end()) {
                    emit_error(a, b, dir, name,
                               "InvalidArgument: needs the " + sname + " and " + corr_name + " series");
                    continue;
                }
                std::vector<double> psi;
                std::vector<double> sur;
                std::vector<double> rho;
                std::vector<std::size_t> ends;
                for (const auto &[end, v] : psi_it->second) {
                    const auto s = sur_it->second.find(end);
                    const auto r = rho_it->second.find(end);
                    if (s != sur_it->second.end() && r != rho_it->second.end()) {
                        ends.push_back(end);
                        psi.push_back(v);
                        sur.push_back(s->second);
                        rho.push_back(r->second);
                    }
                }
                try {
                    const MeasureSeries m_psi(psi, ends);
                    const MeasureSeries m_sur(sur, ends);
                    const MeasureSeries m_rho(rho, ends);
                    if (f.second_window == 0) {
                        emit(std::nullopt, decompose(name, a, b, m_psi, m_sur, m_rho), dir);
                    } else {
                        const RollingConfig second{f.second_window, f.second_stride};
                        for (const auto &w : rolling_decompose(name, a, b, m_psi, m_sur, m_rho, second)) {
                            emit(w.window_end, w.report, dir);
                        }
                    }
                } catch (const Error &e) {
                    emit_error(a, b, dir, name, e.what());
                }
            }
        }
    }
    file.close();
    write_manifest(f.analysis.io.output_dir, sub, {file.name()}, failed ? "partial" : "ok");
    out << "decompose: " << written << " rows, " << failed << " failed\n";
    return failed ? exit_partial : exit_success;
}

// ---------------------------------------------------------------------------
// pairtrade
// ---------------------------------------------------------------------------

struct PairtradeFlags
{
    IoFlags io;
    MeasureFlags measure;
    std::string asset_a;
    std::string asset_b;
    std::vector<std::string> codep{"correlation"};
    std::size_t hist_window = 250;
    std::size_t short_window = 50;
    double z_threshold = 1.5;
    double exit_threshold = 0.5;
    std::size_t window_len = 1000;
    std::size_t stride = 20;
};

const char *position_name(Position p)
{
    switch (p) {
    case Position::short_a_long_b:
        return "-1";
    case Position::long_a_short_b:
        return "1";
    default:
        return "0";
    }
}

int cmd_pairtrade(const CLI::App &sub, const PairtradeFlags &f, std::ostream &out)
{
    const CsvTable table = ingest_csv(f.io.input);
    const TimeSeries &a = table.series[table.index_of(f.asset_a)];
    const TimeSeries &b = table.series[table.index_of(f.asset_b)];
    const auto kinds = to_kinds(f.codep, {CodependenceKind::correlation, CodependenceKind::te, CodependenceKind::ccm,
                                          CodependenceKind::surrogate_te, CodependenceKind::surrogate_ccm});

    OutputFile positions(f.io.output_dir, "pairtrade.csv");
    OutputFile summary(f.io.output_dir, "pairtrade_summary.csv");
    positions.stream() << "measure,t,date,z,position,step_return,cumulative_return\n";
    summary.stream() << "measure,final_cumulative_return,error\n";
    std::size_t failed = 0;
    for (const auto kind : kinds) {
        PairTradingConfig cfg;
        cfg.hist_window = f.hist_window;
        cfg.short_window = f.short_window;
        cfg.z_threshold = f.z_threshold;
        cfg.exit_threshold = f.exit_threshold;
        cfg.codependence = kind;
        cfg.measure = f.measure.options(f.measure.threads);
        const std::string name(codependence_name(kind));
        try {
            const BacktestResult r = pair_trading_backtest(a, b, cfg, RollingConfig{f.window_len, f.stride});
            for (std::size_t t = 0; t < r.z.size(); ++t) {
                positions.stream() << name << ',' << t << ',' << csv_safe(table.date(t + 1)) << ','
                                   << format_double(r.z[t]) << ',' << position_name(r.position[t]) << ','
                                   << format_double(r.step_return[t]) << ','
                                   << format_double(r.cumulative_return[t]) << '\n';
            }
            const double final_return = r.cumulative_return.empty() ? 0.0 : r.cumulative_return.back();
            summary.stream() << name << ',' << format_double(final_return) << ",\n";
            out << name << ": final cumulative return " << format_double(final_return) << '\n';
        } catch (const Error &e) {
            summary.stream() << name << ",," << csv_safe(e.what()) << '\n';
            out << name << ": failed: " << e.what() << '\n';
            ++failed;
        }
    }
    positions.close();
    summary.close();
    write_manifest(f.io.output_dir, sub, {positions.name(), summary.name()}, failed ? "partial" : "ok");
    if (failed == kinds.size()) {
        return exit_fatal;
    }
    return failed ? exit_partial : exit_success;
}

// ---------------------------------------------------------------------------
// portfolio
// ---------------------------------------------------------------------------

struct PortfolioFlags
{
    IoFlags io;
    MeasureFlags measure;
    std::string objective = "min_risk";
    std::string codep = "correlation";
    std::size_t window_len = 1000;
    std::size_t stride = 20;
    double alpha = 0.01;
    double risk_free = 0.0;
};

int cmd_portfolio(const CLI::App &sub, const PortfolioFlags &f, std::ostream &out)
{
    const CsvTable table = ingest_csv(f.io.input);
    RebalanceConfig cfg;
    cfg.objective = f.objective == "max_sharpe" ? Objective::max_sharpe : Objective::min_risk;
    cfg.codependence = to_kind(f.codep);
    cfg.measure = f.measure.options(f.measure.threads);
    cfg.rolling = RollingConfig{f.window_len, f.stride};
    cfg.alpha = f.alpha;
    cfg.risk_free = f.risk_free;
    const PortfolioBacktest r = rebalance_backtest(table.series, cfg);

    OutputFile weights(f.io.output_dir, "portfolio_weights.csv");
    weights.stream() << "date_index,date,asset,weight\n";
    for (std::size_t k = 0; k < r.rebalance_index.size(); ++k) {
        const std::size_t t = r.rebalance_index[k];
        for (std::size_t i = 0; i < table.series.size(); ++i) {
            weights.stream() << t << ',' << csv_safe(table.date(t)) << ',' << table.series[i].label() << ','
                             << format_double(r.weights[k][i]) << '\n';
        }
    }
    weights.close();

    OutputFile values(f.io.output_dir, "portfolio_value.csv");
    values.stream() << "date_index,date,value\n";
    const std::size_t start = r.rebalance_index.front();
    for (std::size_t k = 0; k < r.value.size(); ++k) {
        values.stream() << start + k << ',' << csv_safe(table.date(start + k)) << ',' << format_double(r.value[k])
                        << '\n';
    }
    values.close();

    OutputFile risk(f.io.output_dir, "portfolio_risk.csv");
    risk.stream() << "alpha,var_alpha,stdev,sharpe,final_value,short_sample\n"
                  << format_double(r.risk.alpha) << ',' << format_double(r.risk.var_alpha) << ','
                  << format_double(r.risk.stdev) << ',' << format_double(r.risk.sharpe) << ','
                  << format_double(r.risk.final_value) << ',' << (r.risk.short_sample ? "true" : "false") << '\n';
    risk.close();

    write_manifest(f.io.output_dir, sub, {weights.name(), values.name(), risk.name()}, "ok");
    out << "portfolio: " << r.rebalance_index.size() << " rebalances, VaR " << format_double(r.risk.var_alpha)
        << ", Sharpe " << format_double(r.risk.sharpe) << ", final value " << format_double(r.risk.final_value)
        << '\n';
    if (r.risk.short_sample) {
        out << "warning: fewer than 1/alpha returns; VaR is the worst observed loss\n";
    }
    return exit_success;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateFlags
{
    CoupledDifferenceParams params;
    std::size_t n = 0;
    bool verbatim = false;
    std::string output = "simulate.csv";
    std::string output_dir = ".";
};

int cmd_simulate(const CLI::App &sub, SimulateFlags f, std::ostream &out)
{
    f.params.form = f.verbatim ? CouplingForm::verbatim : CouplingForm::canonical;
    const auto [x, y] = simulate(f.params, f.n);
    auto write = [&](std::ostream &os) {
        os << "x,y\n";
        for (std::size_t t = 0; t < x.size(); ++t) {
            os << format_double(x[t]) << ',' << format_double(y[t]) << '\n';
        }
    };
    if (f.output == "-") {
        write(out);
        return exit_success;
    }
    OutputFile file(f.output_dir, f.output);
    write(file.stream());
    file.close();
    write_manifest(f.output_dir, sub, {file.name()}, "ok");
    return exit_success;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Linear and nonlinear decomposition of pairwise causality between time series", "causal"};
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "INI file with one [command] section of key = value lines");
    bool print_config = false;
    app.add_flag("--print-config", print_config, "Print every option with its default in config-file form")
        ->configurable(false);
    app.set_version_flag("--version", CAUSAL_VERSION);
    app.require_subcommand(0, 1);

    SimulateFlags sim;
    CLI::App *simulate_cmd = app.add_subcommand("simulate", "Write the coupled logistic pair x, y as CSV");
    simulate_cmd->add_option("-n,--n", sim.n, "Number of samples after the transient")
        ->required()
        ->check(at_least_one());
    simulate_cmd->add_option("--r-x", sim.params.r_x, "Growth rate of x");
    simulate_cmd->add_option("--r-y", sim.params.r_y, "Growth rate of y");
    simulate_cmd->add_option("--beta-x-to-y", sim.params.beta_x_to_y, "Coupling of x into y");
    simulate_cmd->add_option("--beta-y-to-x", sim.params.beta_y_to_x, "Coupling of y into x");
    simulate_cmd->add_option("--x0", sim.params.x0, "Initial x");
    simulate_cmd->add_option("--y0", sim.params.y0, "Initial y");
    simulate_cmd->add_option("--transient", sim.params.transient, "Discarded initial steps");
    simulate_cmd->add_flag("--verbatim", sim.verbatim, "Use r_y * x instead of r_y * y in the y self-term");
    simulate_cmd->add_option("--output", sim.output, "Output file name inside --output-dir, or - for stdout");
    simulate_cmd->add_option("--output-dir", sim.output_dir, "Directory for the output files");

    AnalysisFlags analysis;
    CLI::App *analyze_cmd =
        app.add_subcommand("analyze", "Rolling co-dependence measures for every asset pair (long-format CSV)");
    add_analysis_flags(analyze_cmd, analysis,
                       "Comma-separated measures: correlation, te, ccm, surrogate-correlation, surrogate-te, "
                       "surrogate-ccm or all");

    DecomposeFlags dec;
    CLI::App *decompose_cmd = app.add_subcommand(
        "decompose", "Linear fraction, nonlinear fraction and correlation fallacy per pair and direction");
    add_analysis_flags(decompose_cmd, dec.analysis,
                       "Measures to decompose (correlation, te, ccm); their surrogates and the correlation are "
                       "computed or read as needed");
    decompose_cmd->add_option("--second-window", dec.second_window,
                              "Second-level window over the measure series (0: one value per pair)");
    decompose_cmd->add_option("--second-stride", dec.second_stride, "Second-level window stride")
        ->check(at_least_one());

    PairtradeFlags pt;
    CLI::App *pairtrade_cmd = app.add_subcommand("pairtrade", "Z-score pair trading on a co-dependence series");
    add_io_flags(pairtrade_cmd, pt.io);
    pairtrade_cmd->add_option("--asset-a", pt.asset_a, "First asset column")->required();
    pairtrade_cmd->add_option("--asset-b", pt.asset_b, "Second asset column")->required();
    pairtrade_cmd->add_option("--codep", pt.codep, "Co-dependence measures (comma-separated or all)")
        ->delimiter(',')
        ->check(measure_name_check());
    pairtrade_cmd->add_option("--hist-window", pt.hist_window, "Look-back of the co-dependence history (returns)")
        ->check(at_least_one());
    pairtrade_cmd->add_option("--short-window", pt.short_window, "Returns per co-dependence estimate")
        ->check(at_least_one());
    pairtrade_cmd->add_option("--z-threshold", pt.z_threshold, "Entry threshold on |z|")
        ->check(CLI::PositiveNumber);
    pairtrade_cmd->add_option("--exit-threshold", pt.exit_threshold, "Positions close once |z| is below this");
    pairtrade_cmd->add_option("--window-len", pt.window_len, "Warm-up: first decision after this many returns")
        ->check(at_least_one());
    pairtrade_cmd->add_option("--stride", pt.stride, "Returns between decisions")->check(at_least_one());
    add_measure_flags(pairtrade_cmd, pt.measure);

    PortfolioFlags pf;
    CLI::App *portfolio_cmd =
        app.add_subcommand("portfolio", "Rolling long-only portfolio with a causality-substituted risk model");
    add_io_flags(portfolio_cmd, pf.io);
    portfolio_cmd->add_option("--objective", pf.objective, "min_risk or max_sharpe")
        ->check(CLI::IsMember({"min_risk", "max_sharpe"}));
    portfolio_cmd->add_option("--codep", pf.codep, "Co-dependence measure replacing the correlation")
        ->check(measure_name_check());
    portfolio_cmd->add_option("--window-len", pf.window_len, "Trailing returns per estimate")
        ->check(at_least_one());
    portfolio_cmd->add_option("--stride", pf.stride, "Samples between rebalances")->check(at_least_one());
    portfolio_cmd->add_option("--alpha", pf.alpha, "Value-at-risk level")->check(CLI::Range(0.0, 1.0));
    portfolio_cmd->add_option("--risk-free", pf.risk_free, "Per-step risk-free return");
    add_measure_flags(portfolio_cmd, pf.measure);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_success : exit_fatal;
    }
    if (print_config) {
        out << app.config_to_str(true, true);
        return exit_success;
    }

    try {
        if (simulate_cmd->parsed()) {
            return cmd_simulate(*simulate_cmd, sim, out);
        }
        if (analyze_cmd->parsed()) {
            return cmd_analyze(*analyze_cmd, analysis, out);
        }
        if (decompose_cmd->parsed()) {
            return cmd_decompose(*decompose_cmd, dec, out);
        }
        if (pairtrade_cmd->parsed()) {
            return cmd_pairtrade(*pairtrade_cmd, pt, out);
        }
        if (portfolio_cmd->parsed()) {
            if (pf.codep == "all") {
                fail(Errc::InvalidArgument, "portfolio takes a single --codep measure");
            }
            return cmd_portfolio(*portfolio_cmd, pf, out);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_fatal;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_fatal;
    }
    err << app.help();
    return exit_fatal;
}

} // namespace causal::cli
