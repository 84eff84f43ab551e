#include "turan/cli.hpp"

#include "turan/certificate.hpp"
#include "turan/constructions.hpp"
#include "turan/error.hpp"
#include "turan/family.hpp"
#include "turan/lagrangian.hpp"
#include "turan/rounding.hpp"
#include "turan/sdp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <sys/wait.h>
#include <unistd.h>

namespace turan {

using Json = nlohmann::ordered_json;

ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::seconds timeout) {
    if (argv.empty()) throw IoError("run_process: empty command");
    std::vector<char*> args;
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) throw IoError(std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0) {
        dup2(STDERR_FILENO, STDOUT_FILENO);
        execvp(args[0], args.data());
        std::fprintf(stderr, "cannot execute %s: %s\n", args[0], std::strerror(errno));
        _exit(127);
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    ProcessResult result;
    while (true) {
        int status = 0;
        const pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            result.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
            return result;
        }
        if (r < 0) throw IoError(std::string("waitpid failed: ") + std::strerror(errno));
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            result.timed_out = true;
            return result;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
}

namespace {

struct Streams {
    std::ostream& out;
    std::ostream& err;

    void emit(const Json& record) const { out << record.dump() << "\n"; }
};

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// First meaningful line of a file, or the argument itself if no such file exists.
std::string inline_or_file(const std::string& arg) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(arg, ec)) return arg;
    std::istringstream lines(read_text(arg));
    for (std::string line; std::getline(lines, line);) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        return line.substr(b, e - b + 1);
    }
    throw ParseError("file " + arg + " holds no graph");
}

ThreeGraph graph_arg(const std::string& arg) { return parse_graph(inline_or_file(arg)); }

Json graph_list(const std::vector<ThreeGraph>& graphs) {
    Json list = Json::array();
    for (const ThreeGraph& g : graphs) list.push_back(to_string(g));
    return list;
}

std::vector<Integer> parse_schedule(const std::string& text) {
    std::vector<Integer> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        Integer q;
        if (item.empty() || q.set_str(item, 10) != 0 || q < 1) throw ParseError("bad denominator '" + item + "' in schedule");
        out.push_back(q);
    }
    if (out.empty()) throw ParseError("empty denominator schedule");
    return out;
}

struct Config {
    int n = 6;
    std::string family;
    std::string solver;
    std::string target;
    std::string input;
    std::string output;
    std::string cert;
    std::string graph;
    std::string witness;
    std::string kind;
    std::string check_free;
    std::string pattern;
    std::string sdp_path;
    std::string schedule;
    std::string construction;
    std::string candidates;
    long timeout = 3600;
    int restarts = 200;
    int iterations = 10000;
    std::uint64_t seed = 0;
    bool count_only = false;
};

int cmd_admissible(const Config& c, const Streams& io) {
    const Family family = load_family(c.family);
    const std::vector<ThreeGraph> graphs = generate_admissible(c.n, family);
    io.emit({{"command", "admissible"}, {"n", c.n}, {"count", graphs.size()}});
    if (!c.count_only)
        for (std::size_t i = 0; i < graphs.size(); ++i) io.emit({{"index", i}, {"graph", to_string(graphs[i])}});
    io.err << graphs.size() << " admissible graphs of order " << c.n << "\n";
    return kExitOk;
}

struct Layout {
    std::vector<ThreeGraph> admissible;
    std::vector<FlagContext> contexts;
    SdpProblem problem;
};

Layout build_layout(const Family& family, int n) {
    Layout l;
    l.admissible = generate_admissible(n, family);
    l.contexts = enumerate_types_and_flags(n, l.admissible);
    l.problem = build_sdp(l.admissible, l.contexts);
    return l;
}

// Default SDP file name, derived from the problem text so that identical
// inputs name the same file.
std::filesystem::path default_sdp_path(const SdpProblem& p) {
    std::uint64_t h = 14695981039346656037ULL;  // FNV-1a
    for (unsigned char ch : to_sdpa_string(p)) h = (h ^ ch) * 1099511628211ULL;
    char name[32];
    std::snprintf(name, sizeof name, "turan-%016llx.dat-s", static_cast<unsigned long long>(h));
    return std::filesystem::temp_directory_path() / name;
}

int cmd_bound(const Config& c, const Streams& io) {
    const Family family = load_family(c.family);
    const Layout l = build_layout(family, c.n);
    std::filesystem::path sdp = c.sdp_path;
    if (sdp.empty()) sdp = default_sdp_path(l.problem);
    write_sdpa_file(l.problem, sdp);

    std::string solver = c.solver;
    if (solver.empty())
        if (const char* env = std::getenv(kSolverEnv)) solver = env;

    Json record{{"command", "bound"},
                {"n", c.n},
                {"constraints", l.problem.constraints},
                {"blocks", l.contexts.size()},
                {"sdp", sdp.string()}};
    if (solver.empty()) {
        record["solver"] = nullptr;
        io.emit(record);
        io.err << "no solver given; wrote " << sdp.string() << " (" << l.problem.constraints << " constraints)\n";
        return kExitOk;
    }
    std::filesystem::path solution = c.output.empty() ? std::filesystem::path(sdp.string() + ".sol") : std::filesystem::path(c.output);
    const ProcessResult pr = run_process({solver, sdp.string(), solution.string()}, std::chrono::seconds(c.timeout));
    if (pr.timed_out) throw IoError("solver timed out after " + std::to_string(c.timeout) + " s");
    if (pr.exit_status != 0) throw IoError("solver exited with status " + std::to_string(pr.exit_status));
    const NumericSolution sol = parse_solution_file(solution, l.problem);
    record["solver"] = solver;
    record["solution"] = solution.string();
    record["bound"] = sol.bound;
    io.emit(record);
    io.err << "numeric bound " << sol.bound << " from " << l.problem.constraints << " constraints\n";
    return kExitOk;
}

int cmd_round(const Config& c, const Streams& io) {
    const Family family = load_family(c.family);
    const FieldElement target = parse_field_element(c.target);
    const Layout l = build_layout(family, c.n);
    const NumericSolution sol = parse_solution_file(c.input, l.problem);
    RoundingOptions options;
    if (!c.schedule.empty()) options.denominators = parse_schedule(c.schedule);
    if (!c.construction.empty()) options.construction = limit_construction(parse_construction_kind(c.construction));
    try {
        const RoundingResult r = round_solution(family, c.n, sol, target, options);
        write_certificate_file(r.certificate, c.output);
        const RoundingAttempt& last = r.attempts.back();
        io.emit({{"command", "round"},
                 {"valid", true},
                 {"target", to_string(target)},
                 {"method", last.method},
                 {"denominator", last.denominator.get_str()},
                 {"epsilon", to_string(last.epsilon)},
                 {"attempts", r.attempts.size()},
                 {"sharp", graph_list(r.report.sharp)},
                 {"certificate", c.output}});
        io.err << "certificate for bound " << to_string(target) << " written to " << c.output << " after "
               << r.attempts.size() << " attempt(s)\n";
        return kExitOk;
    } catch (const RoundingFailed& e) {
        io.emit({{"command", "round"}, {"valid", false}, {"target", to_string(target)}, {"reason", e.what()},
                 {"attempts", e.attempts().size()}});
        io.err << "rounding failed: " << e.what() << "\n";
        return kExitInvalid;
    }
}

Certificate load_cert_or_invalid(const Config& c, const Streams& io, const char* command, bool& ok) {
    ok = true;
    const std::string text = read_text(c.cert);
    try {
        return parse_certificate(text);
    } catch (const ParseError& e) {
        io.emit({{"command", command}, {"valid", false}, {"reason", std::string("malformed certificate: ") + e.what()}});
        io.err << "malformed certificate: " << e.what() << "\n";
        ok = false;
        return {};
    }
}

int cmd_verify(const Config& c, const Streams& io) {
    bool ok = false;
    const Certificate cert = load_cert_or_invalid(c, io, "verify", ok);
    if (!ok) return kExitInvalid;
    try {
        const SlackReport report = verify_certificate(cert);
        io.emit({{"command", "verify"},
                 {"valid", true},
                 {"bound", to_string(cert.bound)},
                 {"graphs", report.slacks.size()},
                 {"sharp", graph_list(report.sharp)}});
        io.err << "valid: bound " << to_string(cert.bound) << " holds for all " << report.slacks.size()
               << " admissible graphs; " << report.sharp.size() << " sharp\n";
        for (const ThreeGraph& g : report.sharp) io.err << "  sharp " << to_string(g) << "\n";
        return kExitOk;
    } catch (const CertificateRejected& e) {
        io.emit({{"command", "verify"}, {"valid", false}, {"reason", e.what()}});
        io.err << "invalid: " << e.what() << "\n";
        return kExitInvalid;
    }
}

int cmd_slack(const Config& c, const Streams& io) {
    bool ok = false;
    const Certificate cert = load_cert_or_invalid(c, io, "slack", ok);
    if (!ok) return kExitInvalid;
    try {
        const SlackReport report = compute_slacks(cert);
        for (const SlackEntry& e : report.slacks)
            io.emit({{"graph", to_string(e.graph)}, {"slack", to_string(e.slack)}, {"approx", e.slack.to_double()},
                     {"sharp", e.slack.is_zero()}});
        bool nonnegative = true;
        for (const SlackEntry& e : report.slacks) nonnegative = nonnegative && e.slack.sign() >= 0;
        Json summary{{"command", "slack"}, {"graphs", report.slacks.size()}, {"sharp", graph_list(report.sharp)},
                     {"all_nonnegative", nonnegative}};
        if (!report.slacks.empty()) {
            const SlackEntry& w = report.slacks[report.worst()];
            summary["worst"] = {{"graph", to_string(w.graph)}, {"slack", to_string(w.slack)}};
        }
        io.emit(summary);
        io.err << report.slacks.size() << " slacks, " << report.sharp.size() << " zero\n";
        return kExitOk;
    } catch (const CertificateRejected& e) {
        io.emit({{"command", "slack"}, {"valid", false}, {"reason", e.what()}});
        io.err << "invalid: " << e.what() << "\n";
        return kExitInvalid;
    }
}

int cmd_lagrangian(const Config& c, const Streams& io) {
    const ThreeGraph g = graph_arg(c.graph);
    const LagrangianResult r = maximize_lagrangian(g, c.restarts, c.iterations, c.seed);
    Json record{{"command", "lagrangian"}, {"graph", to_string(g)}, {"value", r.value}, {"weights", r.weights}};
    io.err << "numeric Lagrangian " << r.value << "\n";
    if (!c.witness.empty()) {
        const WeightVector x = parse_weight_vector(inline_or_file(c.witness));
        const FieldElement exact = lambda_at(g, x);
        record["exact"] = to_string(exact);
        record["exact_approx"] = exact.to_double();
        io.err << "lambda at witness " << to_string(exact) << " ~ " << exact.to_double() << "\n";
    }
    io.emit(record);
    return kExitOk;
}

int cmd_construction(const Config& c, const Streams& io) {
    const ConstructionKind kind = parse_construction_kind(c.kind);
    const Construction con = build_construction(kind, c.n);
    const Integer formula = construction_edge_count(kind, c.n);
    Json record{{"command", "construction"},
                {"kind", std::string(1, to_char(kind))},
                {"n", c.n},
                {"edges", con.graph.size()},
                {"formula_edges", formula.get_str()},
                {"density", to_string(edge_density(con.graph))},
                {"graph", to_string(con.graph)}};
    Json classes = Json::array();
    for (const auto& cls : con.classes) classes.push_back(cls);
    record["classes"] = classes;
    io.err << to_char(kind) << "_" << c.n << ": " << con.graph.size() << " edges\n";
    if (!c.check_free.empty()) {
        const Family family = load_family(c.check_free);
        const FreenessResult fr = check_free(con.graph, family);
        record["free"] = fr.free;
        if (fr.witness) {
            record["witness"] = {{"member", to_string(fr.witness->member)},
                                 {"induced", fr.witness->induced},
                                 {"embedding", fr.witness->embedding}};
            io.err << "contains " << to_string(fr.witness->member) << "\n";
        } else {
            io.err << "free of all " << family.size() << " members\n";
        }
    }
    io.emit(record);
    return kExitOk;
}

int cmd_blowup_check(const Config& c, const Streams& io) {
    const ThreeGraph f = graph_arg(c.pattern);
    const ThreeGraph g = graph_arg(c.graph);
    const bool result = blowup_contains(f, g);
    io.emit({{"command", "blowup-check"}, {"f", to_string(f)}, {"g", to_string(g)}, {"contained", result}});
    io.err << (result ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_augment(const Config& c, const Streams& io) {
    const Family family = load_family(c.family);
    const Family candidates = load_family(c.candidates);
    const AugmentedFamily a = augment_family(family, candidates.members());
    Json added = Json::array();
    for (const Augmentation& x : a.additions) added.push_back({{"graph", to_string(x.added)}, {"justified_by", to_string(x.justified_by)}});
    io.emit({{"command", "augment"}, {"added", added}, {"family", to_string(a.family)}});
    io.err << a.additions.size() << " of " << candidates.members().size() << " candidates added\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Streams io{out, err};
    Config c;
    CLI::App app{"Flag-algebra Turan density toolkit", "turan"};
    app.require_subcommand(1);

    auto* admissible = app.add_subcommand("admissible", "count and list the admissible graphs of order n");
    admissible->add_option("-n", c.n, "order")->required();
    admissible->add_option("-f,--family", c.family, "family file")->required();
    admissible->add_flag("--count-only", c.count_only, "print the count only");

    auto* bound = app.add_subcommand("bound", "emit the SDP and solve it with an external solver");
    bound->add_option("-n", c.n, "order")->required();
    bound->add_option("-f,--family", c.family, "family file")->required();
    bound->add_option("--solver", c.solver, std::string("solver executable (default: $") + kSolverEnv + ")");
    bound->add_option("--sdp", c.sdp_path, "where to write the SDPA problem");
    bound->add_option("--out", c.output, "where the solver writes its solution");
    bound->add_option("--timeout", c.timeout, "solver timeout in seconds")->check(CLI::PositiveNumber);

    auto* round = app.add_subcommand("round", "round a numeric solution to an exact certificate");
    round->add_option("-n", c.n, "order")->required();
    round->add_option("-f,--family", c.family, "family file")->required();
    round->add_option("--target", c.target, "target bound p/q[+r/s*sqrt(d)]")->required();
    round->add_option("--in", c.input, "solver solution file")->required();
    round->add_option("--out", c.output, "certificate to write")->required();
    round->add_option("--schedule", c.schedule, "comma-separated denominators");
    round->add_option("--construction", c.construction, "limit construction S, J, T or B for the kernel");

    auto* verify = app.add_subcommand("verify", "verify a certificate exactly");
    verify->add_option("--cert", c.cert, "certificate file")->required();

    auto* slack = app.add_subcommand("slack", "report every slack of a certificate");
    slack->add_option("--cert", c.cert, "certificate file")->required();

    auto* lagr = app.add_subcommand("lagrangian", "maximize the Lagrangian of a graph");
    lagr->add_option("-g,--graph", c.graph, "graph text or file")->required();
    lagr->add_option("--witness", c.witness, "weights (text or file) for an exact evaluation");
    lagr->add_option("--restarts", c.restarts, "random restarts")->check(CLI::PositiveNumber);
    lagr->add_option("--iterations", c.iterations, "iterations per restart")->check(CLI::NonNegativeNumber);
    lagr->add_option("--seed", c.seed, "random seed");

    auto* cons = app.add_subcommand("construction", "build S_n, J_n, T_n or B_n");
    cons->add_option("--kind", c.kind, "S, J, T or B")->required();
    cons->add_option("-n", c.n, "order")->required();
    cons->add_option("--check-free", c.check_free, "family file to check against");

    auto* blow = app.add_subcommand("blowup-check", "decide whether F lies in a blow-up of G");
    blow->add_option("-f", c.pattern, "graph F (text or file)")->required();
    blow->add_option("-g", c.graph, "graph G (text or file)")->required();

    auto* augment = app.add_subcommand("augment", "add candidates that contain a blow-up of a member");
    augment->add_option("-f,--family", c.family, "family file")->required();
    augment->add_option("--candidates", c.candidates, "file of candidate graphs")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (admissible->parsed()) return cmd_admissible(c, io);
        if (bound->parsed()) return cmd_bound(c, io);
        if (round->parsed()) return cmd_round(c, io);
        if (verify->parsed()) return cmd_verify(c, io);
        if (slack->parsed()) return cmd_slack(c, io);
        if (lagr->parsed()) return cmd_lagrangian(c, io);
        if (cons->parsed()) return cmd_construction(c, io);
        if (blow->parsed()) return cmd_blowup_check(c, io);
        if (augment->parsed()) return cmd_augment(c, io);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace turan
