#ifndef ENTROSCOPE_TOOLS_CLI_HPP
#define ENTROSCOPE_TOOLS_CLI_HPP

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entroscope/entroscope.hpp"

namespace entroscope::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

using nlohmann::json;

inline double round6(double v)
{
    return std::round(v * 1e6) / 1e6 + 0.0;
}

inline void print_error(std::ostream& err, std::string_view kind, std::string_view message)
{
    std::string msg(message);
    for (auto& c : msg)
        if (c == '\n' || c == '\r')
            c = ' ';
    err << "entroscope: error: " << kind << ": " << msg << '\n';
}

inline bool warnings_suppressed()
{
    const char* v = std::getenv("ENTROSCOPE_NO_WARN");
    return v != nullptr && std::string_view(v) == "1";
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    return read_all(in);
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::SinkFailure, "cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw Error(ErrorKind::SinkFailure, "failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// score

struct ScoreOptions {
    bool from_stdin = false;
    std::optional<std::string> password;
    bool json = false;
};

inline std::optional<std::string> interpretation(double h)
{
    if (h <= 0.0 || h > 1.0)
        return std::nullopt;
    const auto pct = static_cast<int>(std::floor(100.0 * h));
    return "attacker must search at least " + std::to_string(pct) + "% of guesses";
}

inline int cmd_score(const ScoreOptions& opts, std::istream& in, std::ostream& out, std::ostream& err)
{
    std::string password;
    if (opts.password) {
        if (!warnings_suppressed())
            err << "entroscope: warning: passwords given as arguments are visible in the process list; "
                   "prefer --stdin\n";
        password = *opts.password;
    } else {
        password = read_all(in);
        if (!password.empty() && password.back() == '\n')
            password.pop_back();
        if (!password.empty() && password.back() == '\r')
            password.pop_back();
        if (password.find('\n') != std::string::npos) {
            print_error(err, "InvalidArgument", "expected exactly one password on stdin");
            return kDataError;
        }
    }

    const auto score = score_password(password);
    const auto note = interpretation(score.expectation_entropy);
    const auto& p = score.profile;
    if (opts.json) {
        json doc{{"length", p.length()},
                 {"lower", p.lower},
                 {"upper", p.upper},
                 {"digit", p.digit},
                 {"symbol", p.symbol},
                 {"expectation", round6(score.expectation)},
                 {"expectation_entropy", round6(score.expectation_entropy)},
                 {"valid", score.valid},
                 {"interpretation", note ? json(*note) : json(nullptr)}};
        out << doc.dump() << '\n';
    } else {
        out << "length: " << p.length() << '\n'
            << "lower: " << p.lower << '\n'
            << "upper: " << p.upper << '\n'
            << "digit: " << p.digit << '\n'
            << "symbol: " << p.symbol << '\n'
            << "expectation: " << format_fixed6(score.expectation) << '\n'
            << "expectation_entropy: " << format_fixed6(score.expectation_entropy) << '\n'
            << "valid: " << (score.valid ? "true" : "false") << '\n';
        if (note)
            out << *note << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
    std::optional<std::string> label;
    std::optional<std::size_t> length;
    std::size_t count = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;
    bool require_valid = false;
};

inline int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err)
{
    GenSpec spec;
    if (opts.label) {
        auto label = parse_label(*opts.label);
        if (!label) {
            print_error(err, "Usage", "unknown label '" + *opts.label + "'");
            return kUsage;
        }
        spec = GenSpec::named(*label, opts.count, opts.seed);
    } else if (opts.length) {
        spec = GenSpec::custom(*opts.length, opts.count, opts.seed);
    } else {
        print_error(err, "Usage", "gen needs --label or --length");
        return kUsage;
    }
    spec.require_valid = opts.require_valid;

    const auto passwords = generate(spec);
    std::string text;
    text.reserve(passwords.size() * (spec.length + 1));
    for (const auto& pw : passwords) {
        text += pw;
        text += '\n';
    }
    if (opts.out_path)
        write_file(*opts.out_path, text);
    else
        out << text;
    return kOk;
}

// ---------------------------------------------------------------------------
// analyze

enum class Metric { Expectation, Shannon, Min, Guessing, Hartley };

inline const std::map<std::string, Metric>& metric_names()
{
    static const std::map<std::string, Metric> names{{"expectation", Metric::Expectation},
                                                     {"shannon", Metric::Shannon},
                                                     {"min", Metric::Min},
                                                     {"guessing", Metric::Guessing},
                                                     {"hartley", Metric::Hartley}};
    return names;
}

/// Classical metrics of one password, over the distribution of its own
/// characters. Hartley counts distinct characters.
inline double password_metric(Metric metric, const std::string& pw, const PasswordScore& score)
{
    if (metric == Metric::Expectation)
        return score.expectation_entropy;
    std::map<char, std::uint64_t> freq;
    for (char c : pw)
        ++freq[c];
    if (metric == Metric::Hartley)
        return hartley(freq.size());
    std::vector<std::uint64_t> counts;
    for (const auto& [c, n] : freq)
        counts.push_back(n);
    const auto dist = Distribution::from_counts(counts);
    switch (metric) {
    case Metric::Shannon: return shannon(dist);
    case Metric::Min: return min_entropy(dist);
    default: return guessing_entropy(dist);
    }
}

struct AnalyzeOptions {
    std::string in_path;
    std::string metric = "expectation";
    std::optional<std::string> cdf_out;
    std::optional<std::string> label;
    std::size_t grid = 0;
    bool json = false;
};

inline ReportFormat report_format_for(const std::string& path)
{
    return std::filesystem::path(path).extension() == ".json" ? ReportFormat::Json : ReportFormat::Csv;
}

inline int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err)
{
    const auto metric_it = metric_names().find(opts.metric);
    if (metric_it == metric_names().end()) {
        print_error(err, "Usage", "unknown metric '" + opts.metric + "'");
        return kUsage;
    }
    const Metric metric = metric_it->second;
    const std::string label = opts.label.value_or(std::filesystem::path(opts.in_path).stem().string());

    const auto corpus = load_corpus(read_file(opts.in_path), label);
    if (corpus.entries.empty()) {
        print_error(err, "EmptyInput", "no usable passwords in '" + opts.in_path + "' (" +
                                           std::to_string(corpus.skipped) + " skipped)");
        return kDataError;
    }
    const auto scores = score_corpus(corpus);
    std::vector<double> values;
    values.reserve(scores.size());
    std::size_t valid = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        values.push_back(password_metric(metric, corpus.entries[i], scores[i]));
        valid += scores[i].valid;
    }

    auto series = cdf(values, label);
    if (opts.cdf_out) {
        const auto exported = opts.grid > 0 ? resample(series, opts.grid) : series;
        std::ostringstream buf;
        export_report(std::span(&exported, 1), report_format_for(*opts.cdf_out), buf);
        write_file(*opts.cdf_out, buf.str());
    }

    const auto dist = empirical_char_distribution(corpus);
    std::size_t support = 0;
    for (double p : dist.probs())
        support += p > 0.0;
    const double lo = series.points.front().x, mid = median(series), hi = series.points.back().x;

    if (opts.json) {
        json doc{{"label", label},
                 {"count", corpus.entries.size()},
                 {"skipped", corpus.skipped},
                 {"valid", valid},
                 {"metric", opts.metric},
                 {"min", round6(lo)},
                 {"median", round6(mid)},
                 {"max", round6(hi)},
                 {"char_distribution",
                  {{"hartley", round6(hartley(support))},
                   {"shannon", round6(shannon(dist))},
                   {"min_entropy", round6(min_entropy(dist))},
                   {"guessing", round6(guessing_entropy(dist))}}}};
        out << doc.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    } else {
        out << "label: " << label << '\n'
            << "count: " << corpus.entries.size() << '\n'
            << "skipped: " << corpus.skipped << '\n'
            << "valid: " << valid << '\n'
            << "metric: " << opts.metric << '\n'
            << "min: " << format_fixed6(lo) << '\n'
            << "median: " << format_fixed6(mid) << '\n'
            << "max: " << format_fixed6(hi) << '\n'
            << "char_hartley: " << format_fixed6(hartley(support)) << '\n'
            << "char_shannon: " << format_fixed6(shannon(dist)) << '\n'
            << "char_min_entropy: " << format_fixed6(min_entropy(dist)) << '\n'
            << "char_guessing: " << format_fixed6(guessing_entropy(dist)) << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateOptions {
    std::string in_path;
    std::string format = "raw-bytes";
    std::optional<std::string> estimators;
    bool json = false;
    bool allow_short = false;
};

inline int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err)
{
    const auto format = parse_sample_format(opts.format);
    if (!format) {
        print_error(err, "Usage", "unknown format '" + opts.format + "'");
        return kUsage;
    }
    std::vector<Estimator> selected;
    if (opts.estimators) {
        std::stringstream list(*opts.estimators);
        std::string name;
        while (std::getline(list, name, ',')) {
            auto e = parse_estimator(name);
            if (!e) {
                print_error(err, "Usage", "unknown estimator '" + name + "'");
                return kUsage;
            }
            selected.push_back(*e);
        }
        if (selected.empty()) {
            print_error(err, "Usage", "empty estimator list");
            return kUsage;
        }
    }

    const auto seq = decode_samples(read_file(opts.in_path), *format);
    if (selected.empty())
        selected = applicable_estimators(seq.alphabet_size());

    EstimatorOptions eopts;
    eopts.allow_short = opts.allow_short;
    const auto report = estimate_selected(seq, selected, eopts);

    json estimates = json::array();
    json failures = json::array();
    for (const auto& o : report.outcomes) {
        const auto name = std::string(to_string(o.estimator));
        if (o.ok()) {
            const auto& r = o.value();
            if (!warnings_suppressed())
                for (const auto& w : r.warnings)
                    err << "entroscope: warning: " << w << '\n';
            estimates.push_back({{"name", name},
                                 {"bits_per_sample", round6(r.min_entropy)},
                                 {"statistic", round6(r.statistic)},
                                 {"bound", round6(r.bound)}});
            if (!opts.json)
                out << name << ": " << format_fixed6(r.min_entropy) << " bits/sample (statistic "
                    << format_fixed6(r.statistic) << ", bound " << format_fixed6(r.bound) << ")\n";
        } else {
            print_error(err, to_string(o.error().kind()), name + ": " + o.error().what());
            failures.push_back({{"name", name},
                                {"kind", std::string(to_string(o.error().kind()))},
                                {"message", o.error().what()}});
        }
    }
    if (opts.json) {
        json doc{{"estimates", estimates},
                 {"minimum", report.minimum ? json(round6(*report.minimum)) : json(nullptr)}};
        if (!failures.empty())
            doc["errors"] = failures;
        out << doc.dump() << '\n';
    } else if (report.minimum) {
        out << "minimum: " << format_fixed6(*report.minimum) << '\n';
    }
    return report.all_ok() ? kOk : kDataError;
}

// ---------------------------------------------------------------------------

/// Entry point; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Password strength and min-entropy estimation", "entroscope"};
    app.require_subcommand(1, 1);

    ScoreOptions score_opts;
    auto* score = app.add_subcommand("score", "Score one password (read from stdin by default)");
    auto* score_stdin = score->add_flag("--stdin", score_opts.from_stdin, "Read the password from stdin");
    score->add_option("--password", score_opts.password, "Password as an argument (visible to other users)")
        ->excludes(score_stdin);
    score->add_flag("--json", score_opts.json, "JSON output");

    GenOptions gen_opts;
    auto* gen = app.add_subcommand("gen", "Generate uniformly random passwords");
    auto* gen_label = gen->add_option("--label", gen_opts.label,
                                      "RandomMin | Random10ch | Random32ch | Random128ch | RandomMax");
    gen->add_option("--length", gen_opts.length, "Custom password length")
        ->check(CLI::PositiveNumber)
        ->excludes(gen_label);
    gen->add_option("--count", gen_opts.count, "Number of passwords")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_opts.seed, "Deterministic seed (default: OS entropy)");
    gen->add_option("--out", gen_opts.out_path, "Output file (default: stdout)");
    gen->add_flag("--require-valid", gen_opts.require_valid, "Regenerate passwords that are not valid");

    AnalyzeOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "Score a corpus and report the CDF of a metric");
    analyze->add_option("--in", analyze_opts.in_path, "Corpus file, one password per line")->required();
    analyze->add_option("--metric", analyze_opts.metric, "expectation | shannon | min | guessing | hartley");
    analyze->add_option("--cdf-out", analyze_opts.cdf_out, "CDF report path (.json for JSON, CSV otherwise)");
    analyze->add_option("--label", analyze_opts.label, "Series label (default: input file stem)");
    analyze->add_option("--grid", analyze_opts.grid, "Resample the report onto N evenly spaced points");
    analyze->add_flag("--json", analyze_opts.json, "JSON summary");

    EstimateOptions estimate_opts;
    auto* estimate = app.add_subcommand("estimate", "Run min-entropy estimators on a sample file");
    estimate->add_option("--in", estimate_opts.in_path, "Sample file")->required();
    estimate->add_option("--format", estimate_opts.format, "raw-bytes | packed-bits | ascii-binary");
    estimate->add_option("--estimators", estimate_opts.estimators,
                         "Comma list of mcv,collision,markov,compression,tuple");
    estimate->add_flag("--json", estimate_opts.json, "JSON output");
    estimate->add_flag("--allow-short", estimate_opts.allow_short, "Warn instead of failing on short input");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        print_error(err, "Usage", e.what());
        return kUsage;
    }

    try {
        if (score->parsed())
            return cmd_score(score_opts, in, out, err);
        if (gen->parsed())
            return cmd_gen(gen_opts, out, err);
        if (analyze->parsed())
            return cmd_analyze(analyze_opts, out, err);
        return cmd_estimate(estimate_opts, out, err);
    } catch (const Error& e) {
        print_error(err, to_string(e.kind()), e.what());
        return kDataError;
    }
}

} // namespace entroscope::cli

#endif // ENTROSCOPE_TOOLS_CLI_HPP
