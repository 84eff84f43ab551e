#include "turan/sdp.hpp"

#include "turan/error.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace turan {

SdpProblem build_sdp(std::span<const ThreeGraph> admissible, std::span<const FlagContext> contexts) {
    if (admissible.empty()) throw DomainError("build_sdp: empty admissible list");
    const int n = admissible.front().order();

    // Pair densities for every (H, context), kept only long enough to emit.
    std::vector<std::vector<PairDensityMatrix>> densities(admissible.size());
    Integer scale = choose3(n);
    for (std::size_t h = 0; h < admissible.size(); ++h) {
        if (admissible[h].order() != n) throw DomainError("build_sdp: admissible graphs of mixed order");
        for (const FlagContext& ctx : contexts) {
            densities[h].push_back(pair_density_matrix(ctx, admissible[h]));
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), densities[h].back().denominator.get_mpz_t());
        }
    }

    SdpProblem p;
    p.constraints = admissible.size();
    p.type_blocks = contexts.size();
    p.scale = scale;
    for (const FlagContext& ctx : contexts) p.block_sizes.push_back(static_cast<int>(ctx.dimension()));
    p.block_sizes.push_back(1);
    p.block_sizes.push_back(-static_cast<int>(admissible.size()));

    p.entries.push_back({0, p.bound_block(), 1, 1, Rational(-1)});
    for (std::size_t h = 0; h < admissible.size(); ++h) {
        const int row = static_cast<int>(h) + 1;
        p.objective.push_back(Rational(scale) * edge_density(admissible[h]));
        for (const PairDensityMatrix& pd : densities[h]) {
            const Integer factor = scale / pd.denominator;
            for (const auto& e : pd.entries)
                p.entries.push_back({row, pd.type_index + 1, e.row + 1, e.col + 1, Rational(-factor * e.count)});
        }
        p.entries.push_back({row, p.bound_block(), 1, 1, Rational(scale)});
        p.entries.push_back({row, p.slack_block(), row, row, Rational(-1)});
    }
    return p;
}

namespace {

std::string format_value(const Rational& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get_d());
    return buf;
}

// Exact rational value of a decimal literal such as -1.25e-3.
Rational parse_decimal(const std::string& s, std::size_t line) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    std::string digits;
    long exponent = 0;
    bool any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], any = true;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], --exponent, any = true;
    }
    if (!any) throw ParseError("bad number '" + s + "'", line);
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::size_t used = 0;
        try {
            exponent += std::stol(s.substr(i), &used);
        } catch (const std::exception&) {
            throw ParseError("bad exponent in '" + s + "'", line);
        }
        i += used;
    }
    if (i != s.size()) throw ParseError("bad number '" + s + "'", line);
    Integer mant(digits.empty() ? std::string("0") : digits);
    if (negative) mant = -mant;
    Integer ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    return exponent >= 0 ? Rational(mant * ten_pow) : make_rational(mant, ten_pow);
}

struct Token {
    std::string text;
    std::size_t line;
};

// SDPA allows ',', '{', '}', '(' and ')' as separators.
std::vector<Token> tokenize(std::istream& in, std::vector<std::size_t>* line_ends = nullptr) {
    std::vector<Token> tokens;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (header && (line.empty() || line[0] == '"' || line[0] == '*')) continue;
        header = false;
        std::string cur;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' || c == '}' || c == '(' || c == ')') {
                if (!cur.empty()) tokens.push_back({cur, line_no}), cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) tokens.push_back({cur, line_no});
        if (line_ends) line_ends->push_back(tokens.size());
    }
    return tokens;
}

long parse_int(const Token& t) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(t.text, &used);
    } catch (const std::exception&) {
        throw ParseError("expected integer, got '" + t.text + "'", t.line);
    }
    if (used != t.text.size()) throw ParseError("expected integer, got '" + t.text + "'", t.line);
    return v;
}

double parse_double(const Token& t) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t.text, &used);
    } catch (const std::exception&) {
        throw ParseError("expected number, got '" + t.text + "'", t.line);
    }
    if (used != t.text.size() || !std::isfinite(v)) throw ParseError("expected number, got '" + t.text + "'", t.line);
    return v;
}

}  // namespace

void write_sdpa(const SdpProblem& p, std::ostream& out) {
    out << p.constraints << "\n" << p.block_sizes.size() << "\n";
    for (std::size_t i = 0; i < p.block_sizes.size(); ++i) out << (i ? " " : "") << p.block_sizes[i];
    out << "\n";
    for (std::size_t i = 0; i < p.objective.size(); ++i) out << (i ? " " : "") << format_value(p.objective[i]);
    out << "\n";
    for (const SdpEntry& e : p.entries)
        out << e.matrix << " " << e.block << " " << e.row << " " << e.col << " " << format_value(e.value) << "\n";
}

std::string to_sdpa_string(const SdpProblem& p) {
    std::ostringstream out;
    write_sdpa(p, out);
    return out.str();
}

void write_sdpa_file(const SdpProblem& p, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    write_sdpa(p, out);
    if (!out) throw IoError("write failed for " + path.string());
}

SdpProblem parse_sdpa(std::istream& in) {
    const std::vector<Token> tokens = tokenize(in);
    std::size_t pos = 0;
    auto next = [&](const char* what) -> const Token& {
        if (pos >= tokens.size())
            throw ParseError(std::string("unexpected end of input, expected ") + what,
                             tokens.empty() ? 0 : tokens.back().line);
        return tokens[pos++];
    };
    SdpProblem p;
    const long m = parse_int(next("constraint count"));
    if (m < 0) throw ParseError("negative constraint count", tokens[0].line);
    p.constraints = static_cast<std::size_t>(m);
    const long blocks = parse_int(next("block count"));
    if (blocks <= 0) throw ParseError("block count must be positive", tokens[pos - 1].line);
    for (long b = 0; b < blocks; ++b) {
        const Token& t = next("block size");
        const long size = parse_int(t);
        if (size == 0) throw ParseError("zero block size", t.line);
        p.block_sizes.push_back(static_cast<int>(size));
    }
    for (long i = 0; i < m; ++i) {
        const Token& t = next("objective value");
        p.objective.push_back(parse_decimal(t.text, t.line));
    }
    while (pos < tokens.size()) {
        const Token& first = tokens[pos];
        if (pos + 5 > tokens.size()) throw ParseError("incomplete entry", first.line);
        SdpEntry e{static_cast<int>(parse_int(tokens[pos])), static_cast<int>(parse_int(tokens[pos + 1])),
                   static_cast<int>(parse_int(tokens[pos + 2])), static_cast<int>(parse_int(tokens[pos + 3])),
                   parse_decimal(tokens[pos + 4].text, tokens[pos + 4].line)};
        pos += 5;
        if (e.matrix < 0 || e.matrix > m) throw ParseError("matrix number out of range", first.line);
        if (e.block < 1 || e.block > blocks) throw ParseError("block number out of range", first.line);
        const int dim = std::abs(p.block_sizes[e.block - 1]);
        if (e.row < 1 || e.col < 1 || e.row > dim || e.col > dim) throw ParseError("entry index out of range", first.line);
        if (p.block_sizes[e.block - 1] < 0 && e.row != e.col)
            throw ParseError("off-diagonal entry in diagonal block", first.line);
        if (e.row > e.col) std::swap(e.row, e.col);
        p.entries.push_back(std::move(e));
    }
    return p;
}

namespace {

// Dense storage for every block of one solution matrix.
struct BlockValues {
    std::vector<DenseMatrix> blocks;
    std::vector<bool> touched;

    explicit BlockValues(const std::vector<int>& sizes) {
        for (int s : sizes) blocks.emplace_back(std::abs(s));
        touched.assign(sizes.size(), false);
    }
};

BlockValues parse_csdp(const std::vector<Token>& tokens, const SdpProblem& problem) {
    BlockValues x(problem.block_sizes);
    std::size_t pos = problem.constraints;  // skip the dual vector y
    if (tokens.size() < pos) throw ParseError("solution truncated in the dual vector", tokens.empty() ? 0 : tokens.back().line);
    for (std::size_t i = 0; i < pos; ++i) parse_double(tokens[i]);
    while (pos < tokens.size()) {
        const Token& first = tokens[pos];
        if (pos + 5 > tokens.size()) throw ParseError("solution truncated: incomplete entry", first.line);
        const long matno = parse_int(tokens[pos]);
        const long block = parse_int(tokens[pos + 1]);
        const long i = parse_int(tokens[pos + 2]);
        const long j = parse_int(tokens[pos + 3]);
        const double value = parse_double(tokens[pos + 4]);
        pos += 5;
        if (matno != 1 && matno != 2) throw ParseError("matrix number must be 1 or 2", first.line);
        if (block < 1 || block > static_cast<long>(problem.block_sizes.size()))
            throw ParseError("block number out of range", first.line);
        DenseMatrix& mat = x.blocks[block - 1];
        if (i < 1 || j < 1 || i > mat.n || j > mat.n) throw ParseError("entry index out of range", first.line);
        if (matno != 2) continue;
        mat(i - 1, j - 1) = value;
        mat(j - 1, i - 1) = value;
        x.touched[block - 1] = true;
    }
    return x;
}

// SDPA .out: the matrix after "yMat =" written as nested braces.
BlockValues parse_sdpa_out(const std::string& text, const SdpProblem& problem) {
    BlockValues x(problem.block_sizes);
    std::size_t at = text.find("yMat");
    if (at == std::string::npos) throw ParseError("SDPA output has no yMat section");
    const std::size_t start_line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + at, '\n')) + 1;
    std::size_t pos = text.find('{', at);
    if (pos == std::string::npos) throw ParseError("yMat section is empty", start_line);
    ++pos;
    for (std::size_t b = 0; b < problem.block_sizes.size(); ++b) {
        const std::size_t open = text.find_first_of("{}", pos);
        if (open == std::string::npos || text[open] == '}') throw ParseError("yMat truncated before block " + std::to_string(b + 1), start_line);
        // Collect the numbers until the matching close brace.
        int depth = 0;
        std::size_t i = open;
        std::vector<double> values;
        std::string cur;
        for (; i < text.size(); ++i) {
            const char c = text[i];
            if (c == '{') {
                ++depth;
            } else if (c == '}' || c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) values.push_back(parse_double({cur, start_line})), cur.clear();
                if (c == '}' && --depth == 0) break;
            } else {
                cur += c;
            }
        }
        if (i >= text.size()) throw ParseError("yMat truncated in block " + std::to_string(b + 1), start_line);
        pos = i + 1;
        DenseMatrix& mat = x.blocks[b];
        const bool diagonal = problem.block_sizes[b] < 0;
        const std::size_t expected = diagonal ? static_cast<std::size_t>(mat.n) : static_cast<std::size_t>(mat.n) * mat.n;
        if (values.size() != expected) throw ParseError("yMat block " + std::to_string(b + 1) + " has wrong size", start_line);
        for (int r = 0; r < mat.n; ++r) {
            if (diagonal) {
                mat(r, r) = values[r];
            } else {
                for (int c = 0; c < mat.n; ++c) mat(r, c) = values[static_cast<std::size_t>(r) * mat.n + c];
            }
        }
        x.touched[b] = true;
    }
    return x;
}

}  // namespace

NumericSolution parse_solution(std::istream& in, const SdpProblem& problem) {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (text.empty()) throw ParseError("empty solution file");
    if (!text.empty() && text.back() != '\n' && text.find("yMat") == std::string::npos)
        throw ParseError("solution truncated: missing final newline",
                         static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1);

    BlockValues x = [&] {
        if (text.find("yMat") != std::string::npos) return parse_sdpa_out(text, problem);
        std::istringstream again(text);
        return parse_csdp(tokenize(again), problem);
    }();

    const int lambda = problem.bound_block() - 1;
    if (static_cast<std::size_t>(lambda) >= x.blocks.size() || !x.touched[lambda])
        throw ParseError("solution has no value for the bound block");

    NumericSolution sol;
    sol.bound = x.blocks[lambda](0, 0);
    for (std::size_t b = 0; b < problem.type_blocks; ++b) sol.blocks.push_back(x.blocks[b]);
    const int slack = problem.slack_block() - 1;
    const double scale = Rational(problem.scale).get_d();
    if (static_cast<std::size_t>(slack) < x.blocks.size())
        for (int i = 0; i < x.blocks[slack].n; ++i) sol.slacks.push_back(x.blocks[slack](i, i) / scale);
    return sol;
}

NumericSolution parse_solution_file(const std::filesystem::path& path, const SdpProblem& problem) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open solution file " + path.string());
    return parse_solution(in, problem);
}

}  // namespace turan
