#include "mmskit/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mmskit/allocators.hpp"
#include "mmskit/errors.hpp"
#include "mmskit/gen.hpp"
#include "mmskit/json_io.hpp"
#include "mmskit/oracle.hpp"
#include "mmskit/parallel.hpp"
#include "mmskit/transforms.hpp"
#include "mmskit/verify.hpp"

namespace mmskit::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct UsageError : Error {
    using Error::Error;
};

std::pair<int, int> parse_range(const std::string& text, const char* what) {
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        if (colon == std::string::npos) {
            const int v = std::stoi(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return {v, v};
        }
        const std::string a = text.substr(0, colon);
        const std::string b = text.substr(colon + 1);
        const int lo = std::stoi(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        const int hi = std::stoi(b, &used);
        if (used != b.size()) throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError(std::string("bad ") + what + " range '" + text + "' (expected N or A:B)");
    }
}

Rational parse_rational_flag(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const Error& e) {
        throw UsageError(std::string(flag) + " must be an exact rational such as 3/4+3/3836: " + e.what());
    }
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << j.dump(2) << '\n';
    } else {
        io::write_json_file(path, j);
    }
}

Instance load_instance(const std::string& path) { return io::instance_from_json(io::read_json_file(path)); }

struct Common {
    std::optional<std::uint64_t> budget;

    OracleOptions oracle() const {
        OracleOptions o = oracle_options_from_env();
        if (budget) {
            if (*budget == 0) throw UsageError("--budget must be positive");
            o.node_budget = *budget;
        }
        return o;
    }
};

Json trace_to_json(const ReductionTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
        steps.push_back({{"rule", to_string(s.kind)},
                         {"agent", s.agent},
                         {"goods", io::bundle_to_json(s.goods)},
                         {"threshold", io::rational_to_json(s.threshold)}});
    }
    Json scaling = Json::array();
    for (const auto& r : t.scaling) scaling.push_back(io::rational_to_json(r));
    return {{"steps", steps},
            {"scaling", scaling},
            {"agents", t.agents},
            {"goods", t.goods},
            {"input_order", t.base_order.perm}};
}

std::string ratio_text(const Rational& received, const Rational& share) {
    if (share.is_zero()) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", (received / share).to_double());
    return buf;
}

struct BenchRow {
    std::string branch;
    StepCounters counters{};
    std::optional<VerificationReport> report;
    double solve_ms = 0;
    double verify_ms = 0;
    std::string error;
    int n = 0;
    int m = 0;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Approximate maximin-share allocations with exact verification", "mmskit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Common common;
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget", common.budget, "Oracle node budget (default: MMSKIT_BUDGET or 50000000)");
    };

    // gen
    auto* gen = app.add_subcommand("gen", "Generate seeded instances");
    std::uint64_t seed = 0;
    std::string family = "uniform";
    std::string agents = "2:6";
    std::string goods_range = "2:18";
    int grid = 100;
    int count = 0;
    std::string gen_out;
    gen->add_option("--seed", seed, "Base seed");
    gen->add_option("--family", family, "uniform | correlated | heavy-pairs | heavy-singles");
    gen->add_option("--agents", agents, "Agent count or range A:B");
    gen->add_option("--goods", goods_range, "Goods count or range A:B");
    gen->add_option("--grid", grid, "Largest integer value");
    gen->add_option("--count", count, "Write a corpus of this many instances into the -o directory");
    gen->add_option("-o,--output", gen_out, "Output file (or directory with --count)");

    // mms
    auto* mms_cmd = app.add_subcommand("mms", "Exact maximin share of one agent");
    std::string mms_in;
    std::string mms_out;
    int agent = 1;
    std::optional<int> d;
    mms_cmd->add_option("-i,--input", mms_in, "Instance JSON")->required();
    mms_cmd->add_option("-o,--output", mms_out, "Output JSON (default stdout)");
    mms_cmd->add_option("--agent", agent, "Agent (1-based)");
    mms_cmd->add_option("-d", d, "Number of bundles (default n)");
    add_budget(mms_cmd);

    // reduce
    auto* red = app.add_subcommand("reduce", "Build the ordered, normalized, irreducible instance");
    std::string red_in;
    std::string red_out;
    std::string epsilon_text = "0";
    red->add_option("-i,--input", red_in, "Instance JSON")->required();
    red->add_option("-o,--output", red_out, "Output JSON (default stdout)");
    red->add_option("--epsilon", epsilon_text, "Exact epsilon >= 0");
    add_budget(red);

    // solve
    auto* solve = app.add_subcommand("solve", "Compute an alpha-MMS allocation");
    std::string solve_in;
    std::string solve_out;
    std::string alpha_text;
    std::optional<std::string> delta_text;
    bool complete = false;
    solve->add_option("-i,--input", solve_in, "Instance JSON")->required();
    solve->add_option("-o,--output", solve_out, "Allocation JSON (default stdout)");
    solve->add_option("--alpha", alpha_text, "Exact factor, at most 3/4+3/3836")->required();
    solve->add_option("--delta", delta_text, "Override delta (default 3/956)");
    solve->add_flag("--complete", complete, "Give leftover goods to agent 1");
    add_budget(solve);

    // verify
    auto* ver = app.add_subcommand("verify", "Check an allocation against exact MMS values");
    std::string ver_in;
    std::string ver_alloc;
    std::string ver_out;
    std::string ver_alpha;
    ver->add_option("-i,--input", ver_in, "Instance JSON")->required();
    ver->add_option("-a,--allocation", ver_alloc, "Allocation JSON")->required();
    ver->add_option("--alpha", ver_alpha, "Exact factor")->required();
    ver->add_option("-o,--output", ver_out, "Report JSON (default stdout)");
    add_budget(ver);

    // bench
    auto* bench = app.add_subcommand("bench", "Solve and verify every instance of a corpus");
    std::string bench_in;
    std::string bench_out;
    std::string bench_alpha = "3/4+3/3836";
    int jobs = 1;
    bool no_timing = false;
    bench->add_option("-i,--input", bench_in, "Corpus manifest.json")->required();
    bench->add_option("-o,--output", bench_out, "CSV output (default stdout)");
    bench->add_option("--alpha", bench_alpha, "Exact factor");
    bench->add_option("--jobs", jobs, "Worker threads");
    bench->add_flag("--no-timing", no_timing, "Leave runtime columns empty (byte-stable output)");
    add_budget(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    std::string violation_base;
    try {
        if (*gen) {
            violation_base = gen_out;
            GenSpec spec;
            spec.seed = seed;
            spec.family = family_from_string(family);
            std::tie(spec.n_min, spec.n_max) = parse_range(agents, "agents");
            std::tie(spec.m_min, spec.m_max) = parse_range(goods_range, "goods");
            spec.grid = grid;
            validate(spec);
            if (count > 0) {
                if (gen_out.empty()) throw UsageError("--count needs -o DIR");
                out << write_corpus(gen_out, corpus_specs(spec, count)).string() << '\n';
            } else {
                emit(io::instance_to_json(generate(spec)), gen_out, out);
            }
            return kOk;
        }
        if (*mms_cmd) {
            const Instance inst = load_instance(mms_in);
            const int bundles = d.value_or(inst.n());
            const MmsResult r = mms(inst, agent, bundles, Bundle::range(inst.m()), common.oracle());
            emit({{"agent", agent},
                  {"d", bundles},
                  {"value", io::rational_to_json(r.value)},
                  {"witness", io::partition_to_json(r.witness)}},
                 mms_out, out);
            return kOk;
        }
        if (*red) {
            const Instance inst = load_instance(red_in);
            const Rational eps = parse_rational_flag(epsilon_text, "--epsilon");
            if (eps.sign() < 0) throw UsageError("--epsilon must be >= 0");
            if (eps >= Rational(1, 4)) throw UsageError("--epsilon must be below 1/4");
            PipelineOptions opts;
            opts.oracle = common.oracle();
            const DeltaOni oni = to_delta_oni(inst, eps, opts);
            const Rational delta = Rational(4) * eps / (Rational(1) - Rational(4) * eps);
            emit({{"epsilon", io::rational_to_json(eps)},
                  {"delta", io::rational_to_json(delta)},
                  {"instance", io::instance_to_json(oni.instance)},
                  {"trace", trace_to_json(oni.trace)}},
                 red_out, out);
            return kOk;
        }
        if (*solve) {
            violation_base = solve_out;
            const Rational alpha = parse_rational_flag(alpha_text, "--alpha");
            if (alpha > kMaxAlpha) {
                err << "error: alpha " << alpha.to_string()
                    << " is above the supported bound 3/4+3/3836 (= " << kMaxAlpha.to_string() << ")\n";
                return kUsage;
            }
            if (alpha.sign() <= 0) throw UsageError("--alpha must be positive");
            const Instance inst = load_instance(solve_in);
            SolveOptions opts;
            opts.pipeline.oracle = common.oracle();
            if (delta_text) opts.delta = parse_rational_flag(*delta_text, "--delta");
            Solution sol = main_approx_mms(inst, alpha, opts);
            if (complete) sol.allocation.complete();
            emit(io::allocation_to_json(sol.allocation), solve_out, out);
            std::ostream& note = solve_out.empty() ? err : out;
            note << "branch " << to_string(sol.branch) << ", " << sol.reduced_agents
                 << " agent(s) left after reduction\n";
            return kOk;
        }
        if (*ver) {
            const Instance inst = load_instance(ver_in);
            const Allocation alloc = io::allocation_from_json(io::read_json_file(ver_alloc));
            const Rational alpha = parse_rational_flag(ver_alpha, "--alpha");
            PipelineOptions opts;
            opts.oracle = common.oracle();
            const VerificationReport rep = check_alpha_mms(inst, alloc, alpha, opts);
            emit(report_to_json(rep), ver_out, out);
            return rep.pass ? kOk : kVerificationFailed;
        }
        if (*bench) {
            violation_base = bench_out;
            const Rational alpha = parse_rational_flag(bench_alpha, "--alpha");
            if (jobs < 1) throw UsageError("--jobs must be >= 1");
            const fs::path manifest(bench_in);
            const auto entries = read_manifest(manifest);
            const OracleOptions oracle = common.oracle();
            std::vector<BenchRow> rows(entries.size());
            set_threads(jobs);
            for_each_index(entries.size(), Execution::parallel, [&](std::size_t k) {
                BenchRow& row = rows[k];
                SolveOptions opts;
                opts.pipeline.oracle = oracle;
                opts.pipeline.exec = Execution::serial;
                try {
                    const Instance inst = load_instance((manifest.parent_path() / entries[k].path).string());
                    row.n = inst.n();
                    row.m = inst.m();
                    const auto t0 = std::chrono::steady_clock::now();
                    const Solution sol = main_approx_mms(inst, alpha, opts);
                    const auto t1 = std::chrono::steady_clock::now();
                    row.report = check_alpha_mms(inst, sol.allocation, alpha, opts.pipeline);
                    const auto t2 = std::chrono::steady_clock::now();
                    row.branch = to_string(sol.branch);
                    row.counters = sol.counters;
                    row.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                    row.verify_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
                } catch (const GuaranteeViolation& e) {
                    row.error = std::string("guarantee violated: ") + e.what();
                } catch (const Error& e) {
                    row.error = e.what();
                }
            });
            set_threads(0);

            std::ostringstream csv;
            csv << "entry,path,family,seed,n,m,branch,agent,mms,received,ratio,ok,solve_ms,verify_ms\n";
            std::map<std::string, int> branches;
            StepCounters totals{};
            int failures = 0;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const auto& row = rows[k];
                const auto& spec = entries[k].spec;
                const std::string prefix = std::to_string(k) + "," + entries[k].path + "," +
                                           to_string(spec.family) + "," + std::to_string(spec.seed) + "," +
                                           std::to_string(row.n) + "," + std::to_string(row.m) + ",";
                if (!row.error.empty()) {
                    ++failures;
                    err << "entry " << k << ": " << row.error << '\n';
                    csv << prefix << "error,,,,,,0,,\n";
                    continue;
                }
                ++branches[row.branch];
                for (std::size_t s = 0; s < totals.size(); ++s) totals[s] += row.counters[s];
                if (!row.report->pass) ++failures;
                std::string timing = ",";
                if (!no_timing) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.3f,%.3f", row.solve_ms, row.verify_ms);
                    timing = buf;
                }
                for (std::size_t i = 0; i < row.report->agents.size(); ++i) {
                    const auto& a = row.report->agents[i];
                    csv << prefix << row.branch << ',' << i + 1 << ',' << a.mms.to_string() << ','
                        << a.received.to_string() << ',' << ratio_text(a.received, a.mms) << ','
                        << (a.ok ? 1 : 0) << ',' << timing << '\n';
                }
            }
            if (bench_out.empty()) {
                out << csv.str();
            } else {
                std::ofstream f(bench_out, std::ios::binary);
                if (!f) throw Error("cannot write " + bench_out);
                f << csv.str();
            }
            std::ostream& summary = bench_out.empty() ? err : out;
            summary << "entries " << rows.size() << ", failures " << failures << '\n';
            for (Branch b : {Branch::bag_fill, Branch::approx_mms1, Branch::approx_mms2}) {
                summary << "branch " << to_string(b) << ' ' << branches[to_string(b)] << '\n';
            }
            for (StepKind s : {StepKind::R1, StepKind::R2, StepKind::R3, StepKind::R4, StepKind::R5,
                               StepKind::BagAward, StepKind::ZeroMms}) {
                summary << "step " << to_string(s) << ' ' << totals[static_cast<std::size_t>(s)] << '\n';
            }
            return failures == 0 ? kOk : kVerificationFailed;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& e) {
        err << "error: oracle budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const GuaranteeViolation& e) {
        const std::string path = violation_base.empty() ? "mmskit_violation.json" : violation_base + ".violation.json";
        std::ofstream(path) << e.state() << '\n';
        err << "error: guarantee violated: " << e.what() << "; state written to " << path << '\n';
        return kGuarantee;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace mmskit::cli
