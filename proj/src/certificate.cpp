#include "turan/certificate.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace turan {

std::size_t SlackReport::worst() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < slacks.size(); ++i)
        if (slacks[i].slack < slacks[best].slack) best = i;
    return best;
}

DensityTable density_table(std::span<const ThreeGraph> admissible, std::span<const FlagContext> contexts) {
    DensityTable table(admissible.size());
    detail::parallel_chunks(admissible.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t h = begin; h < end; ++h)
            for (const FlagContext& ctx : contexts) table[h].push_back(pair_density_matrix(ctx, admissible[h]));
    });
    return table;
}

std::vector<FieldElement> slacks_for(std::span<const ThreeGraph> admissible, const DensityTable& densities,
                                     std::span<const FieldMatrix> matrices, const FieldElement& bound) {
    std::vector<FieldElement> out(admissible.size());
    detail::parallel_chunks(admissible.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t h = begin; h < end; ++h) {
            FieldElement slack = bound - FieldElement(edge_density(admissible[h]));
            for (std::size_t b = 0; b < matrices.size(); ++b) {
                const PairDensityMatrix& pd = densities[h][b];
                const FieldMatrix& q = matrices[b];
                // <Q, P> with P stored as upper-triangle counts over a common
                // denominator; off-diagonal entries appear twice in the trace.
                FieldElement sum;
                for (const auto& e : pd.entries) {
                    const long weight = e.row == e.col ? e.count : 2 * e.count;
                    sum += q[e.row][e.col] * FieldElement(weight);
                }
                if (!sum.is_zero()) slack -= sum * FieldElement(make_rational(1, pd.denominator));
            }
            out[h] = std::move(slack);
        }
    });
    return out;
}

namespace {

std::string block_name(std::size_t index, const CertificateBlock& b) {
    return "block " + std::to_string(index) + " (type " + to_string(b.type) + ")";
}

void check_structure(const Certificate& c) {
    if (c.n < 5 || c.n > 7) throw CertificateRejected("order n = " + std::to_string(c.n) + " is outside 5..7");
    if (!is_valid_discriminant(c.discriminant))
        throw CertificateRejected("invalid discriminant " + std::to_string(c.discriminant));
    auto in_field = [&](const FieldElement& x) { return x.is_rational() || x.discriminant() == c.discriminant; };
    if (!in_field(c.bound)) throw CertificateRejected("bound is not in the certificate's field");
    const std::vector<int> orders = type_orders(c.n);
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const CertificateBlock& b = c.blocks[i];
        const int s = b.type.order();
        if (std::find(orders.begin(), orders.end(), s) == orders.end())
            throw CertificateRejected(block_name(i, b) + ": type order " + std::to_string(s) + " is not used at n = " +
                                      std::to_string(c.n));
        const std::size_t dim = b.flags.size();
        if (b.matrix.size() != dim) throw CertificateRejected(block_name(i, b) + ": matrix dimension differs from flag count");
        for (std::size_t r = 0; r < dim; ++r) {
            if (b.matrix[r].size() != dim) throw CertificateRejected(block_name(i, b) + ": matrix is not square");
            for (std::size_t col = 0; col < dim; ++col) {
                if (!in_field(b.matrix[r][col])) throw CertificateRejected(block_name(i, b) + ": entry outside the field");
                if (!(b.matrix[r][col] == b.matrix[col][r])) throw CertificateRejected(block_name(i, b) + ": matrix is not symmetric");
            }
        }
    }
}

}  // namespace

std::vector<FlagContext> certificate_contexts(const Certificate& c) {
    std::vector<FlagContext> out;
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const CertificateBlock& b = c.blocks[i];
        try {
            out.emplace_back(static_cast<int>(i), b.type, flag_order(c.n, b.type.order()), b.flags);
        } catch (const DomainError& e) {
            throw CertificateRejected(block_name(i, b) + ": " + e.what());
        }
    }
    return out;
}

SlackReport compute_slacks(const Certificate& c) {
    check_structure(c);
    const std::vector<FlagContext> contexts = certificate_contexts(c);
    const std::vector<ThreeGraph> admissible = generate_admissible(c.n, c.family);
    std::vector<FieldMatrix> matrices;
    for (const CertificateBlock& b : c.blocks) matrices.push_back(b.matrix);
    const std::vector<FieldElement> slacks = slacks_for(admissible, density_table(admissible, contexts), matrices, c.bound);

    SlackReport report;
    for (std::size_t h = 0; h < admissible.size(); ++h) {
        report.slacks.push_back({admissible[h], slacks[h]});
        if (slacks[h].is_zero()) report.sharp.push_back(admissible[h]);
    }
    return report;
}

SlackReport verify_certificate(const Certificate& c) {
    check_structure(c);
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const LdltResult f = ldlt(c.blocks[i].matrix);
        if (!f.positive_semidefinite)
            throw CertificateRejected(block_name(i, c.blocks[i]) + " is not positive semidefinite: " + f.reason +
                                      " at pivot " + std::to_string(f.failed_step + 1) + " (value " +
                                      to_string(f.failed_value) + ")");
    }
    SlackReport report = compute_slacks(c);
    for (const SlackEntry& e : report.slacks)
        if (e.slack.sign() < 0)
            throw CertificateRejected("graph " + to_string(e.graph) + " violates the bound by " + to_string(-e.slack));
    return report;
}

std::vector<ThreeGraph> sharp_graphs(const Certificate& c) { return verify_certificate(c).sharp; }

std::string serialize(const Certificate& c) {
    std::ostringstream out;
    out << "TURAN-CERT v1\n";
    out << "n " << c.n << "\n";
    out << "discriminant " << c.discriminant << "\n";
    out << "bound " << to_string(c.bound) << "\n";
    out << "family " << c.family.size() << "\n" << to_string(c.family);
    out << "blocks " << c.blocks.size() << "\n";
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        const CertificateBlock& b = c.blocks[i];
        out << "block " << i << " " << b.flags.size() << "\n";
        out << "type " << to_string(b.type) << "\n";
        for (const ThreeGraph& f : b.flags) out << "flag " << to_string(f) << "\n";
        for (std::size_t r = 0; r < b.matrix.size(); ++r) {
            for (std::size_t col = 0; col <= r; ++col) out << (col ? " " : "") << to_string(b.matrix[r][col]);
            out << "\n";
        }
    }
    return out.str();
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    // Next non-blank, non-comment line, split on whitespace.
    std::vector<std::string> next(const char* expected) {
        while (pos_ <= text_.size()) {
            std::size_t eol = text_.find('\n', pos_);
            if (eol == std::string_view::npos) eol = text_.size();
            std::string_view line = text_.substr(pos_, eol - pos_);
            pos_ = eol + 1;
            ++line_;
            std::istringstream words{std::string(line)};
            std::vector<std::string> out;
            for (std::string w; words >> w;) out.push_back(w);
            if (out.empty() || out[0][0] == '#') continue;
            return out;
        }
        throw ParseError(std::string("unexpected end of certificate, expected ") + expected, line_);
    }

    bool at_end() {
        const std::size_t save_pos = pos_;
        const std::size_t save_line = line_;
        try {
            next("");
        } catch (const ParseError&) {
            return true;
        }
        pos_ = save_pos;
        line_ = save_line;
        return false;
    }

    std::size_t line() const { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

long parse_count(const std::string& word, std::size_t line) {
    std::size_t used = 0;
    long v = -1;
    try {
        v = std::stol(word, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != word.size() || v < 0) throw ParseError("expected a non-negative integer, got '" + word + "'", line);
    return v;
}

std::vector<std::string> keyword_line(LineReader& in, const std::string& keyword, std::size_t args) {
    std::vector<std::string> w = in.next(keyword.c_str());
    if (w[0] != keyword) throw ParseError("expected '" + keyword + "', got '" + w[0] + "'", in.line());
    if (w.size() != args + 1)
        throw ParseError("'" + keyword + "' takes " + std::to_string(args) + " argument(s)", in.line());
    return w;
}

template <class T, class F>
T wrap(LineReader& in, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw ParseError(e.what(), in.line());
    } catch (const DomainError& e) {
        throw ParseError(e.what(), in.line());
    }
}

}  // namespace

Certificate parse_certificate(std::string_view text) {
    LineReader in(text);
    Certificate c;
    {
        std::vector<std::string> w = in.next("header");
        if (w.size() != 2 || w[0] != "TURAN-CERT" || w[1] != "v1")
            throw ParseError("missing 'TURAN-CERT v1' header", in.line());
    }
    c.n = static_cast<int>(parse_count(keyword_line(in, "n", 1)[1], in.line()));
    {
        const std::string d = keyword_line(in, "discriminant", 1)[1];
        c.discriminant = parse_count(d, in.line());
        if (!is_valid_discriminant(c.discriminant)) throw ParseError("invalid discriminant " + d, in.line());
    }
    auto field_value = [&](const std::string& word) {
        FieldElement x = wrap<FieldElement>(in, [&] { return parse_field_element(word); });
        if (!x.is_rational() && x.discriminant() != c.discriminant)
            throw ParseError("element " + word + " is outside Q[sqrt(" + std::to_string(c.discriminant) + ")]", in.line());
        return x;
    };
    c.bound = field_value(keyword_line(in, "bound", 1)[1]);

    const long members = parse_count(keyword_line(in, "family", 1)[1], in.line());
    for (long i = 0; i < members; ++i) {
        std::vector<std::string> w = in.next("family member");
        if (w.size() != 1) throw ParseError("family member must be a single graph", in.line());
        std::string_view g = w[0];
        const bool induced = g.front() == '!';
        if (induced) g.remove_prefix(1);
        wrap<bool>(in, [&] { return c.family.add(parse_graph(g), induced); });
    }

    const long blocks = parse_count(keyword_line(in, "blocks", 1)[1], in.line());
    for (long b = 0; b < blocks; ++b) {
        const std::vector<std::string> head = keyword_line(in, "block", 2);
        if (parse_count(head[1], in.line()) != b)
            throw ParseError("block index " + head[1] + " out of sequence, expected " + std::to_string(b), in.line());
        const long dim = parse_count(head[2], in.line());
        CertificateBlock block;
        try {
            block.type = wrap<ThreeGraph>(in, [&] { return parse_graph(keyword_line(in, "type", 1)[1]); });
            for (long f = 0; f < dim; ++f)
                block.flags.push_back(wrap<ThreeGraph>(in, [&] { return parse_graph(keyword_line(in, "flag", 1)[1]); }));
            block.matrix.assign(dim, std::vector<FieldElement>(dim));
            for (long r = 0; r < dim; ++r) {
                const std::vector<std::string> row = in.next("matrix row");
                if (static_cast<long>(row.size()) != r + 1)
                    throw ParseError("block " + std::to_string(b) + ": row " + std::to_string(r + 1) + " has " +
                                         std::to_string(row.size()) + " entries, expected " + std::to_string(r + 1),
                                     in.line());
                for (long col = 0; col <= r; ++col) {
                    FieldElement x = field_value(row[col]);
                    block.matrix[col][r] = x;
                    block.matrix[r][col] = std::move(x);
                }
            }
        } catch (const ParseError& e) {
            const std::string what = e.what();
            if (what.find("block " + std::to_string(b) + ":") != std::string::npos) throw;
            throw ParseError("block " + std::to_string(b) + ": " + what, 0);
        }
        c.blocks.push_back(std::move(block));
    }
    if (!in.at_end()) throw ParseError("trailing content after the last block", in.line() + 1);
    return c;
}

void write_certificate_file(const Certificate& c, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << serialize(c);
    if (!out) throw IoError("write failed for " + path.string());
}

Certificate load_certificate_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open certificate " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_certificate(buffer.str());
}

}  // namespace turan
