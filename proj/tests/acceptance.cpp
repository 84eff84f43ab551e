// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed below.

#include "psd_oracle.hpp"
#include "support.hpp"
#include "turan/certificate.hpp"
#include "turan/cli.hpp"
#include "turan/constructions.hpp"
#include "turan/lagrangian.hpp"
#include "turan/rounding.hpp"
#include "turan/sdp.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace turan;
using namespace turan::testing;

namespace {

constexpr double kLagrangianTolerance = 1e-9;
constexpr double kDensityTolerance = 0.05;
constexpr int kPerturbedCertificates = 100;
constexpr int kOracleMatrices = 1000;
constexpr std::chrono::seconds kSolverTimeout{3600};

// Failed checks are collected rather than thrown so one line can list them.
class Criterion {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool passed() const { return failures_.empty(); }
    std::string summary() const {
        std::ostringstream s;
        const auto& items = passed() ? notes_ : failures_;
        for (std::size_t i = 0; i < items.size(); ++i) s << (i ? "; " : "") << items[i];
        return s.str();
    }

private:
    std::vector<std::string> failures_, notes_;
};

bool report(int number, const char* title, const std::function<void(Criterion&)>& body) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.passed() ? "PASS" : "FAIL") << " criterion " << number << " (" << title << ", " << std::fixed
              << std::setprecision(1) << secs << " s): " << c.summary() << std::endl;
    return c.passed();
}

Family family_of(std::initializer_list<const char*> members) {
    Family f;
    for (const char* m : members) {
        std::string_view g = m;
        const bool induced = g.front() == '!';
        if (induced) g.remove_prefix(1);
        f.add(parse_graph(g), induced);
    }
    return f;
}

struct Pipeline {
    std::size_t constraints = 0;
    double numeric_bound = 0;
    std::optional<Certificate> certificate;
    SlackReport report;
};

// Emits the SDP, runs the external solver, rounds to `target` and verifies.
Pipeline run_pipeline(Criterion& c, const Family& family, const FieldElement& target, ConstructionKind kind,
                      const std::string& tag) {
    Pipeline p;
    const auto adm = generate_admissible(6, family);
    const SdpProblem problem = build_sdp(adm, enumerate_types_and_flags(6, adm));
    p.constraints = problem.constraints;
    const auto dir = std::filesystem::temp_directory_path();
    const auto sdp = dir / ("turan-acceptance-" + tag + ".dat-s"), sol = dir / ("turan-acceptance-" + tag + ".sol");
    write_sdpa_file(problem, sdp);
    const ProcessResult pr = run_process({TURAN_SOLVER_SCRIPT, sdp.string(), sol.string()}, kSolverTimeout);
    if (pr.timed_out || pr.exit_status != 0) {
        c.expect(false, "solver failed");
        return p;
    }
    const NumericSolution numeric = parse_solution_file(sol, problem);
    p.numeric_bound = numeric.bound;
    RoundingOptions options;
    options.construction = limit_construction(kind);
    try {
        RoundingResult r = round_solution(family, 6, numeric, target, options);
        p.report = verify_certificate(r.certificate);
        p.certificate = std::move(r.certificate);
        c.note("rounded at q = " + r.attempts.back().denominator.get_str() + " via " + r.attempts.back().method);
    } catch (const RoundingFailed& e) {
        c.expect(false, std::string("rounding failed: ") + e.what());
    }
    return p;
}

void check_certificate(Criterion& c, const Pipeline& p, const FieldElement& target, std::size_t constraints) {
    c.expect(p.constraints == constraints, "constraint count " + std::to_string(p.constraints));
    if (!p.certificate) return;
    c.expect(p.certificate->bound == target, "certificate bound differs from target");
    bool nonnegative = true;
    for (const SlackEntry& e : p.report.slacks) nonnegative = nonnegative && e.slack.sign() >= 0;
    c.expect(nonnegative, "negative slack");
    std::ostringstream s;
    s << p.constraints << " constraints, numeric " << std::setprecision(10) << p.numeric_bound << ", verified bound "
      << to_string(target) << " with " << p.report.sharp.size() << " sharp graphs";
    c.note(s.str());
}

std::optional<Certificate> two_ninths_certificate;

}  // namespace

int main() {
    bool all = true;

    all &= report(1, "admissible censuses", [](Criterion& c) {
        const ThreeGraph h1 = parse_graph("6:123,124,134,125,135,245,345,126,236,146,156,456");
        const struct {
            const char* name;
            Family family;
            std::size_t expected;
        } rows[] = {
            {"K4", single(k4()), 964},
            {"K4,H1", [&] { Family f = single(k4()); f.add(h1); return f; }(), 962},
            {"K4,!E1", family_of({"4:123,124,134,234", "!4:123"}), 34},
            {"H", single(h_graph()), 192},
            {"H,H1,H2,H3", two_ninths_family(), 38},
        };
        for (const auto& r : rows) {
            const std::size_t got = generate_admissible(6, r.family).size();
            c.expect(got == r.expected, std::string(r.name) + ": " + std::to_string(got) + " != " + std::to_string(r.expected));
            c.note(std::string(r.name) + " " + std::to_string(got));
        }
    });

    all &= report(2, "exact bound 2/9", [](Criterion& c) {
        const FieldElement target(Rational(2, 9));
        const Pipeline p = run_pipeline(c, two_ninths_family(), target, ConstructionKind::S, "two-ninths");
        check_certificate(c, p, target, 38);
        two_ninths_certificate = p.certificate;
    });

    all &= report(3, "exact bound 4/9", [](Criterion& c) {
        const FieldElement target(Rational(4, 9));
        const Family family = load_family(data_dir() / "f32_family.txt");
        const Pipeline p = run_pipeline(c, family, target, ConstructionKind::J, "four-ninths");
        check_certificate(c, p, target, generate_admissible(6, family).size());
    });

    all &= report(4, "Lagrangians", [](Criterion& c) {
        const struct {
            const char* graph;
            const char* witness;
            FieldElement value;
        } rows[] = {
            {"5:123,124,125,345",
             "13/62+3/62*sqrt(5),13/62+3/62*sqrt(5),6/31-1/31*sqrt(5),6/31-1/31*sqrt(5),6/31-1/31*sqrt(5)",
             FieldElement(Rational(189, 961), Rational(15, 961), 5)},
            {"5:123,234,345,145,125", "1/5,1/5,1/5,1/5,1/5", FieldElement(Rational(6, 25))},
            {"4:123,124,134", "1/3,2/9,2/9,2/9", FieldElement(Rational(8, 27))},
            {"5:123,124,125,134,135,145", "1/3,1/6,1/6,1/6,1/6", FieldElement(Rational(1, 3))},
            {"6:123,124,125,126,134,135,146,235,246,256,345,346,356,456", "1/6,1/6,1/6,1/6,1/6,1/6",
             FieldElement(Rational(7, 18))},
            {"5:123,124,134,234,135,235,145,245", "2/9,2/9,2/9,2/9,1/9", FieldElement(Rational(32, 81))},
            {"5:123,124,134,234,125,135,235,145,245",
             "5/6-1/6*sqrt(13),5/6-1/6*sqrt(13),-2/9+1/9*sqrt(13),-2/9+1/9*sqrt(13),-2/9+1/9*sqrt(13)",
             FieldElement(Rational(-35, 27), Rational(13, 27), 13)},
        };
        double worst = 0;
        for (const auto& r : rows) {
            const ThreeGraph g = parse_graph(r.graph);
            const double numeric = maximize_lagrangian(g).value;
            const double err = std::abs(numeric - r.value.to_double());
            worst = std::max(worst, err);
            c.expect(err <= kLagrangianTolerance, std::string(r.graph) + ": numeric error " + std::to_string(err));
            c.expect(lambda_at(g, parse_weight_vector(r.witness)) == r.value,
                     std::string(r.graph) + ": exact value differs from " + to_string(r.value));
        }
        std::ostringstream s;
        s << "7 exact matches, worst numeric error " << std::scientific << std::setprecision(2) << worst;
        c.note(s.str());
    });

    all &= report(5, "constructions", [](Criterion& c) {
        auto c3 = [](long n) { return n * (n - 1) * (n - 2) / 6; };
        auto c2 = [](long n) { return n * (n - 1) / 2; };
        for (long n = 3; n <= 30; ++n) {
            long j = 0;
            for (long k = 0; k <= n; ++k) j = std::max(j, (n - k) * c2(k));
            const long a = (n + 2) / 3, b = (n + 1) / 3, t = n / 3;
            const long expected[] = {a * b * t, j, a * b * t + c2(a) * b + c2(b) * t + c2(t) * a,
                                     c3(n) - c3((n + 1) / 2) - c3(n / 2)};
            const ConstructionKind kinds[] = {ConstructionKind::S, ConstructionKind::J, ConstructionKind::T,
                                              ConstructionKind::B};
            for (int i = 0; i < 4; ++i)
                c.expect(static_cast<long>(build_construction(kinds[i], static_cast<int>(n)).graph.size()) == expected[i],
                         std::string(1, to_char(kinds[i])) + "_" + std::to_string(n) + " edge count");
        }
        const ThreeGraph t12 = build_construction(ConstructionKind::T, 12).graph;
        const ThreeGraph b12 = build_construction(ConstructionKind::B, 12).graph;
        c.expect(check_free(t12, single(k4())).free, "T_12 contains K4");
        for (const ThreeGraph& f : t_avoided_list()) c.expect(check_free(t12, single(f)).free, "T_12 contains " + to_string(f));
        for (const ThreeGraph& f : b_avoided_list()) c.expect(check_free(b12, single(f)).free, "B_12 contains " + to_string(f));
        c.expect(check_free(b12, single(fano())).free, "B_12 contains the Fano plane");
        c.expect(check_free(build_construction(ConstructionKind::S, 12).graph, single(h_graph())).free, "S_12 contains H");
        for (ConstructionKind k : {ConstructionKind::S, ConstructionKind::J, ConstructionKind::T, ConstructionKind::B}) {
            const double d = static_cast<double>(build_construction(k, 30).graph.size()) / c3(30);
            c.expect(std::abs(d - construction_limit_density(k).get_d()) < kDensityTolerance,
                     std::string(1, to_char(k)) + "_30 density " + std::to_string(d));
        }
        c.note("edge counts n = 3..30, 18 freeness checks, 4 densities");
    });

    all &= report(6, "blow-up relations", [](Criterion& c) {
        const ThreeGraph h43 = parse_graph("10:125,136,147,238,249,34a");
        c.expect(blowup_contains(f5(), k4_minus()), "F5 not in a blow-up of K4-");
        c.expect(contains_subgraph(blowup(f5(), 3), h43), "H43 not in F5(3)");
        c.expect(blowup_contains(h43, f5()), "H43 not in a blow-up of F5");
        for (const char* g : {"4:123,124,134", "5:123,124,125,345", "5:123,124,135,245"})
            c.expect(blowup_contains(h_graph(), parse_graph(g)), std::string("H not in a blow-up of ") + g);
        int pairs = 0, disagree = 0;
        for (const ThreeGraph& f : all_graphs_up_to(5))
            for (const ThreeGraph& g : all_graphs_up_to(4)) {
                ++pairs;
                disagree += blowup_contains(f, g) != contains_subgraph(blowup(g, f.order()), f);
            }
        c.expect(disagree == 0, std::to_string(disagree) + " disagreements with the materialized blow-up");
        c.note("oracle agrees on " + std::to_string(pairs) + " pairs");
    });

    all &= report(7, "verifier soundness", [](Criterion& c) {
        if (!two_ninths_certificate) {
            RoundingOptions options;
            options.construction = limit_construction(ConstructionKind::S);
            const auto adm = generate_admissible(6, two_ninths_family());
            const NumericSolution s = parse_solution_file(data_dir() / "two_ninths_n6.sol",
                                                          build_sdp(adm, enumerate_types_and_flags(6, adm)));
            two_ninths_certificate = round_solution(two_ninths_family(), 6, s, FieldElement(Rational(2, 9)), options).certificate;
        }
        const Certificate& base = *two_ninths_certificate;
        const std::vector<ThreeGraph> sharp = sharp_graphs(base);
        const std::vector<FlagContext> contexts = certificate_contexts(base);
        const FieldElement nudge(make_rational(1, 1000000000));
        std::mt19937_64 rng(7001);
        int rejected = 0, tried = 0;
        while (tried < kPerturbedCertificates) {
            const ThreeGraph& h = sharp[rng() % sharp.size()];
            const std::size_t b = rng() % contexts.size();
            const PairDensityMatrix p = pair_density_matrix(contexts[b], h);
            if (p.entries.empty()) continue;
            const auto& e = p.entries[rng() % p.entries.size()];
            Certificate bad = base;
            bad.blocks[b].matrix[e.row][e.col] += nudge;
            if (e.row != e.col) bad.blocks[b].matrix[e.col][e.row] += nudge;
            ++tried;
            try {
                verify_certificate(bad);
            } catch (const CertificateRejected&) {
                ++rejected;
            }
        }
        c.expect(rejected == kPerturbedCertificates, std::to_string(kPerturbedCertificates - rejected) + " perturbed certificates accepted");
        const OracleTally t = run_psd_oracle(7002, kOracleMatrices);
        c.expect(t.agree == t.total, std::to_string(t.total - t.agree) + " LDLT verdicts disagree with the oracle");
        c.note(std::to_string(rejected) + "/" + std::to_string(tried) + " perturbed rejected; " + std::to_string(t.agree) +
               "/" + std::to_string(t.total) + " PSD verdicts agree (" + std::to_string(t.psd) + " PSD)");
    });

    all &= report(8, "Q[sqrt 5] verification", [](Criterion& c) {
        const Certificate good = load_certificate_file(data_dir() / "sqrt5_toy.cert");
        const SlackReport r = verify_certificate(good);
        c.expect(r.slacks.size() == 2, "toy family should admit two graphs");
        c.expect(good.discriminant == 5, "toy certificate is not over Q[sqrt 5]");
        const Certificate bad = load_certificate_file(data_dir() / "sqrt5_toy_perturbed.cert");
        bool rejected = false;
        try {
            verify_certificate(bad);
        } catch (const CertificateRejected&) {
            rejected = true;
        }
        c.expect(rejected, "perturbed toy certificate accepted");
        c.note("toy valid with bound " + to_string(good.bound) + ", perturbed copy rejected");
    });

    return all ? 0 : 1;
}
