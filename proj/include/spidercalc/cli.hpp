#pragma once

// Command-line surface. Every subcommand prints one Report to the given
// stream; exit code 0 means all checks passed, 1 means some check failed,
// 2 means the input could not be parsed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "family.hpp"
#include "fibre.hpp"
#include "report.hpp"
#include "so4.hpp"

namespace spidercalc {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

inline std::string join_args(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args) {
        if (!out.empty()) out += " ";
        out += a;
    }
    return out;
}

// first stock matrix of each supported size, size 2 falls back to the
// smallest Walsh matrix
inline HadamardMatrix default_matrix(int n) {
    if (n == 2) return walsh(1);
    return stock_matrices(n)[0];
}

inline ExactScalar gram_expected(int n) {
    BigInt v = BigInt(n) * n * n;
    for (int i = 0; i < 4; ++i) v *= (n - 1);
    v *= (n - 2);
    return ExactScalar::rational(BigRat(v));
}

inline void report_hadamard_checks(Report& r, const HadamardMatrix& h) {
    HadamardAxioms ax = check_hadamard_axioms(h);
    r.check_true("transpose_consistent", ax.transpose_consistent);
    r.check_true("schur_unit", ax.schur_unit);
    r.check_true("unitary_scaled", ax.unitary_scaled);
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out) {
    using cli_detail::join_args;
    using cli_detail::read_file;
    using cli_detail::write_file;

    CLI::App app{"complementary spider calculus toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a sign matrix file");
    gen->require_subcommand(1);
    int gen_n = 1, gen_q = 3;
    std::string gen_out;
    auto* gen_walsh = gen->add_subcommand("walsh", "tensor power of the 2x2 matrix");
    gen_walsh->add_option("--n", gen_n, "tensor power")->required()->check(CLI::Range(1, 8));
    gen_walsh->add_option("-o,--output", gen_out, "output file");
    auto* gen_paley = gen->add_subcommand("paley", "quadratic residue construction");
    gen_paley->add_option("--q", gen_q, "odd prime, 3 mod 4")->required();
    gen_paley->add_option("-o,--output", gen_out, "output file");

    // verify
    auto* verify = app.add_subcommand("verify", "verify a matrix file");
    verify->require_subcommand(1);
    std::string verify_file;
    auto* verify_had = verify->add_subcommand("had", "the three defining identities");
    verify_had->add_option("file", verify_file, "matrix file")->required();

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "graph attached to a matrix");
    std::string graph_file, graph_out;
    bool graph_looped = false;
    graph_cmd->add_option("file", graph_file, "matrix file")->required();
    graph_cmd->add_flag("--looped", graph_looped, "add loops on the row copies");
    graph_cmd->add_option("-o,--output", graph_out, "DOT output file");

    // aut
    auto* aut_cmd = app.add_subcommand("aut", "classical automorphism group");
    std::string aut_file;
    aut_cmd->add_option("file", aut_file, "matrix file")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a diagram file");
    std::string eval_file, eval_matrix;
    int eval_standard = 0, eval_mn = 0;
    eval_cmd->add_option("file", eval_file, "diagram file")->required();
    auto* opt_matrix = eval_cmd->add_option("--matrix", eval_matrix, "matrix file");
    auto* opt_standard =
        eval_cmd->add_option("--standard", eval_standard, "standard basis of this size");
    auto* opt_mn = eval_cmd->add_option("--mn", eval_mn, "single matrix block M_n");
    opt_matrix->excludes(opt_standard)->excludes(opt_mn);
    opt_standard->excludes(opt_mn);

    // normalize
    auto* norm_cmd = app.add_subcommand("normalize", "rewrite a diagram to reduced form");
    std::string norm_file;
    int norm_n = 4;
    bool norm_trace = false;
    norm_cmd->add_option("file", norm_file, "diagram file")->required();
    norm_cmd->add_option("--N", norm_n, "dimension binding the prefactor")->required();
    norm_cmd->add_flag("--trace", norm_trace, "list applied rules");

    // dims
    auto* dims_cmd = app.add_subcommand("dims", "saturated span ranks against squared Catalan");
    int dims_n = 4, dims_legs = 6;
    dims_cmd->add_option("--N", dims_n, "matrix size")->required();
    dims_cmd->add_option("--max-legs", dims_legs, "slot leg bound")->check(CLI::Range(0, 8));

    // gram
    auto* gram_cmd = app.add_subcommand("gram", "determinant of the five-element Gram matrix");
    int gram_n = 4;
    gram_cmd->add_option("--N", gram_n, "matrix size")->required();

    // so4
    app.add_subcommand("so4", "orthogonal-group picture of the size-4 symmetry");

    // qh
    auto* qh = app.add_subcommand("qh", "quantum matrix checks");
    qh->require_subcommand(1);
    int qh_n = 2;
    auto* qh_tr = qh->add_subcommand("transpose", "rescaled transpose on a matrix block");
    qh_tr->add_option("--n", qh_n, "block size")->required()->check(CLI::Range(1, 3));

    // invariance
    auto* inv_cmd = app.add_subcommand("invariance", "closed diagrams across all stock matrices");
    int inv_size = 4, inv_edges = 12;
    inv_cmd->add_option("--size", inv_size, "matrix size")->required();
    inv_cmd->add_option("--max-edges", inv_edges, "edge bound")->check(CLI::Range(0, 12));

    std::vector<const char*> argv;
    argv.push_back("spidercalc");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        out << "parse error\t" << report_detail::escape(e.what()) << "\n";
        return 2;
    }

    Report r;
    r.command = join_args(args);
    try {
        if (gen_walsh->parsed() || gen_paley->parsed()) {
            HadamardMatrix h = gen_walsh->parsed() ? walsh(gen_n) : paley_type1(gen_q);
            std::string text = matrix_to_text(h);
            r.check_true("hadamard", is_hadamard(h));
            r.note("size", std::to_string(h.size()));
            if (gen_out.empty())
                r.note("matrix", text);
            else {
                write_file(gen_out, text);
                r.note("written", gen_out);
            }
        } else if (verify_had->parsed()) {
            HadamardMatrix h = matrix_from_text(read_file(verify_file));
            r.note("size", std::to_string(h.size()));
            cli_detail::report_hadamard_checks(r, h);
        } else if (graph_cmd->parsed()) {
            HadamardMatrix h = matrix_from_text(read_file(graph_file));
            HadamardGraphData g = hadamard_graph(h, graph_looped);
            int v = 4 * h.size();
            bool regular = true;
            int loops = 0;
            for (int i = 0; i < v; ++i) {
                int deg = 0;
                for (int j = 0; j < v; ++j)
                    if (j != i) deg += g.adjacency[i][j] ? 1 : 0;
                if (deg != h.size()) regular = false;
                loops += g.adjacency[i][i] ? 1 : 0;
            }
            r.check("degree", std::to_string(h.size()),
                    regular ? std::to_string(h.size()) : "?");
            r.check("loops", std::to_string(graph_looped ? 2 * h.size() : 0),
                    std::to_string(loops));
            r.note("vertices", std::to_string(v));
            if (graph_out.empty())
                r.note("adjacency", graph_to_adjacency_text(g));
            else {
                write_file(graph_out, graph_to_dot(g));
                r.note("written", graph_out);
            }
        } else if (aut_cmd->parsed()) {
            HadamardMatrix h = matrix_from_text(read_file(aut_file));
            auto group = automorphism_group(h);
            bool all_ok = true;
            for (const auto& q : group)
                if (!is_automorphism(h, q)) all_ok = false;
            r.check_true("all_verified", all_ok);
            r.note("order", std::to_string(group.size()));
        } else if (eval_cmd->parsed()) {
            int picked = (opt_matrix->count() ? 1 : 0) + (opt_standard->count() ? 1 : 0) +
                         (opt_mn->count() ? 1 : 0);
            if (picked != 1)
                throw std::invalid_argument("pick exactly one of --matrix, --standard, --mn");
            Diagram d = diagram_from_text(read_file(eval_file));
            FibreContext ctx =
                opt_matrix->count()
                    ? FibreContext::classical(matrix_from_text(read_file(eval_matrix)))
                : opt_standard->count()
                    ? FibreContext::standard(eval_standard)
                    : FibreContext::quantum(QuantumSpace::matrix_block(eval_mn),
                                            quantum_hadamard_transpose(eval_mn));
            Tensor t = evaluate(d, ctx);
            r.note("slot", std::to_string(t.n_lower()) + "," + std::to_string(t.n_upper()));
            r.note("dim", std::to_string(t.dim()));
            r.note("scale", t.scale().to_string());
            std::ostringstream entries;
            for (std::size_t i = 0; i < t.entries().size(); ++i) {
                if (i) entries << ",";
                entries << t.entries()[i];
            }
            r.note("entries", entries.str());
            if (d.n_lower == 0 && d.n_upper == 0) {
                ExactScalar v = t.value_at({}, {});
                r.note("scalar", v.to_string());
                if (auto rw = evaluate_closed(d, ctx.dim()))
                    r.check("matches_normalize", rw->to_string(), v.to_string());
            }
        } else if (norm_cmd->parsed()) {
            Diagram d = diagram_from_text(read_file(norm_file));
            NormalizeResult res = normalize(d);
            r.check_true("reduced", is_reduced(res.diagram));
            r.note("steps", std::to_string(res.steps.size()));
            r.note("prefactor", res.diagram.prefactor.to_string());
            if (is_empty_scalar(res.diagram))
                r.note("scalar", res.diagram.prefactor.bind(norm_n).to_string());
            r.note("reduced_diagram", diagram_to_text(res.diagram));
            if (norm_trace) {
                std::string trace;
                for (const auto& s : res.steps) {
                    if (!trace.empty()) trace += ";";
                    trace += s.rule;
                }
                r.note("trace", trace);
            }
        } else if (dims_cmd->parsed()) {
            FibreContext ctx = FibreContext::classical(cli_detail::default_matrix(dims_n));
            std::vector<Diagram> gens = {Diagram::black_spider(2, 2), Diagram::white_spider(2, 2),
                                         Diagram::cap()};
            for (int total = 0; total <= dims_legs; total += 2)
                for (int k = 0; 2 * k <= total; ++k) {
                    int l = total - k;
                    BigInt c = catalan(total / 2);
                    SpanResult sr = span_saturate(ctx, gens, {k, l}, dims_legs);
                    std::string slot = std::to_string(k) + "," + std::to_string(l);
                    std::ostringstream want;
                    want << c * c;
                    r.check("slot " + slot, want.str(), std::to_string(sr.rank));
                }
        } else if (gram_cmd->parsed()) {
            FibreContext ctx = FibreContext::classical(cli_detail::default_matrix(gram_n));
            ExactScalar det = gram_det(five_element_basis(ctx));
            r.check("determinant", cli_detail::gram_expected(gram_n).to_string(), det.to_string());
        } else if (app.got_subcommand("so4")) {
            So4Report s = so4_check();
            r.check_true("h_hadamard", s.h_hadamard);
            r.check_true("f_hadamard", s.f_hadamard);
            r.check_true("h_self_inverse", s.h_self_inverse);
            r.check_true("f_self_inverse", s.f_self_inverse);
            r.check_true("h_from_diagram", s.h_from_diagram);
            r.check_true("black_identity", s.black_identity);
            r.check_true("white_identity", s.white_identity);
            r.check_true("difference_form", s.difference_form);
            r.check_true("sum_form", s.sum_form);
            r.check_true("fourier_spider", s.fourier_spider);
        } else if (qh_tr->parsed()) {
            QuantumSpace qs = QuantumSpace::matrix_block(qh_n);
            Tensor h = quantum_hadamard_transpose(qh_n);
            QuantumHadamardCheck c = check_quantum_hadamard(qs, h);
            r.check_true("unitary", c.unitary);
            r.check_true("schur_square_unit", c.schur_square_unit);
            r.check_true("real_transposed", c.real_transposed);
            r.note("dim", std::to_string(qs.dim()));
        } else if (inv_cmd->parsed()) {
            std::vector<Diagram> fam = reduced_families();
            std::vector<Diagram> closed = closed_pair_family(fam, inv_edges);
            std::vector<HadamardMatrix> mats = stock_matrices(inv_size);
            bool across = true, rewrite_match = true;
            for (const auto& d : closed) {
                ExactScalar ref = ExactScalar::zero();
                bool first = true;
                for (const auto& h : mats) {
                    ExactScalar v = evaluate(d, FibreContext::classical(h)).value_at({}, {});
                    if (first) {
                        ref = v;
                        first = false;
                    } else if (v != ref) {
                        across = false;
                    }
                }
                auto rw = evaluate_closed(d, inv_size);
                if (!rw || *rw != ref) rewrite_match = false;
            }
            r.note("diagrams", std::to_string(closed.size()));
            r.note("matrices", std::to_string(mats.size()));
            r.check_true("matrix_independent", across);
            r.check_true("matches_normalize", rewrite_match);
        }
    } catch (const std::invalid_argument& e) {
        out << "input error\t" << report_detail::escape(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        out << "check error\t" << report_detail::escape(e.what()) << "\n";
        return 1;
    }
    out << r.to_text();
    return r.overall() ? 0 : 1;
}

}  // namespace spidercalc
