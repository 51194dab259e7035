#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyptel/errors.hpp"
#include "hyptel/factor.hpp"
#include "hyptel/ore.hpp"
#include "hyptel/term.hpp"
#include "hyptel/verify.hpp"

using hyptel::Error;
using hyptel::InvalidInput;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string expr;
    std::string input_file;
    std::string k_range;
    std::string format = "text";
    std::string out_file;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_range = true) {
    cmd->add_option("--expr", o.expr, "term as an expression in n and k");
    cmd->add_option("--input", o.input_file,
                    "structured input file ([term] / [sum] sections)");
    if (with_range) {
        cmd->add_option("--k-range", o.k_range,
                        "summation range: all, 0..n, or lo..hi");
    }
    cmd->add_option("--format", o.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", o.out_file, "write the report to a file");
}

hyptel::TermInput resolve_input(const CommonOpts& o) {
    hyptel::TermInput in;
    if (!o.input_file.empty()) {
        std::ifstream f(o.input_file);
        if (!f) throw InvalidInput("cannot open input file: " + o.input_file);
        std::ostringstream ss;
        ss << f.rdbuf();
        in = hyptel::load_term_document(ss.str());
    } else if (!o.expr.empty()) {
        in.spec = hyptel::parse_term(o.expr);
    } else {
        throw InvalidInput("one of --expr or --input is required");
    }
    if (!o.k_range.empty()) in.k_range = hyptel::parse_k_range(o.k_range);
    return in;
}

void emit(const CommonOpts& o, const std::string& text) {
    if (!o.out_file.empty()) {
        std::ofstream f(o.out_file);
        if (!f) throw InvalidInput("cannot open output file: " + o.out_file);
        f << text;
    } else {
        std::cout << text;
    }
}

// unsupported or invalid input -> 2, exhausted caps and broken invariants -> 3
int fail_code(const Error& e) {
    const std::string& c = e.code();
    return (c == "ansatz_cap_exceeded" || c == "internal") ? 3 : 2;
}

void report_error(const CommonOpts& o, const Error& e) {
    if (o.format == "json") {
        json j{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        emit(o, j.dump(2) + "\n");
    } else {
        std::cerr << "error: " << e.what() << "\n";
    }
}

std::string affine_text(const hyptel::AffinePoly& p) {
    return p.to_poly().to_string();
}

json telescoper_json(const hyptel::TelescoperResult& r, bool timings) {
    json classes = json::array();
    for (const auto& cd : r.right.classes) {
        json c{{"factor", affine_text(cd.factor)},
               {"t", cd.t},
               {"s", cd.s}};
        if (cd.ratio) c["ratio"] = cd.ratio->to_string();
        classes.push_back(std::move(c));
    }
    json auts = json::array();
    for (const auto& a : r.automorphisms) auts.push_back(a.name());
    json comps = json::array();
    for (const auto& c : r.parts.components) {
        comps.push_back({{"dim", c.dim()},
                         {"order", c.op.order()},
                         {"zero_sum", c.zero_sum},
                         {"op", c.op.to_json()}});
    }
    json dropped = json::array();
    for (const auto& [d, zs] : r.parts.dropped) {
        dropped.push_back({{"dim", d}, {"zero_sum", zs}});
    }
    json out{{"term", r.h.spec.to_string()},
             {"kernel", r.h0.spec.to_string()},
             {"prefactor_ratio", r.r0.to_string()},
             {"dim", r.dim},
             {"right_factor", {{"op", r.right.op.to_json()},
                               {"classes", std::move(classes)}}},
             {"automorphisms", std::move(auts)},
             {"components", std::move(comps)},
             {"dropped", std::move(dropped)},
             {"l_left", r.l_left.to_json()},
             {"l_min", r.l_min.to_json()}};
    json sizes{{"factored_bytes", r.factored_bytes}};
    if (r.l_expanded) {
        out["l_expanded"] = r.l_expanded->to_json();
        sizes["expanded_bytes"] = r.expanded_bytes;
        if (r.expanded_bytes > 0) {
            sizes["ratio"] = static_cast<double>(r.factored_bytes) /
                             static_cast<double>(r.expanded_bytes);
        }
    }
    out["sizes"] = std::move(sizes);
    if (r.certificate) out["certificate"] = r.certificate->to_string();
    if (timings) {
        const auto& t = r.timings;
        out["timings"] = {{"reduce", t.reduce},
                          {"right_factor", t.right},
                          {"split", t.split},
                          {"components", t.components},
                          {"combine", t.combine}};
    }
    return out;
}

std::string telescoper_text(const hyptel::TelescoperResult& r, bool timings,
                            bool minimal_only) {
    std::ostringstream out;
    if (minimal_only) {
        out << r.l_min.to_string() << "\n";
        return out.str();
    }
    out << "term: " << r.h.spec.to_string() << "\n";
    out << "kernel: " << r.h0.spec.to_string() << " (dimension " << r.dim
        << ")\n";
    out << "right factor (order " << r.right.op.order()
        << "): " << r.right.op.to_string() << "\n";
    for (const auto& cd : r.right.classes) {
        out << "  class " << affine_text(cd.factor) << ": t=" << cd.t
            << ", s=" << cd.s;
        if (cd.ratio) out << ", loop ratio " << cd.ratio->to_string();
        out << "\n";
    }
    if (!r.automorphisms.empty()) {
        out << "symmetries:";
        for (const auto& a : r.automorphisms) out << " " << a.name();
        out << "\n";
    }
    for (std::size_t i = 0; i < r.parts.components.size(); ++i) {
        const auto& c = r.parts.components[i];
        out << "component " << i + 1 << ": dim " << c.dim() << ", order "
            << c.op.order() << (c.zero_sum ? ", zero-sum" : "") << ": "
            << c.op.to_string() << "\n";
    }
    for (const auto& [d, zs] : r.parts.dropped) {
        out << "dropped block: dim " << d << (zs ? ", zero-sum" : "")
            << " (target vanishes)\n";
    }
    out << "left factor (order " << r.l_left.order()
        << "): " << r.l_left.to_string() << "\n";
    out << "telescoper order: " << r.l_left.order() + r.right.op.order()
        << "\n";
    out << "minimal recurrence (order " << r.l_min.order()
        << "): " << r.l_min.to_string() << "\n";
    if (r.l_expanded) {
        out << "expanded telescoper (order " << r.l_expanded->order()
            << "): " << r.l_expanded->to_string() << "\n";
    }
    if (r.certificate) {
        out << "certificate: " << r.certificate->to_string() << "\n";
    }
    out << "sizes: factored " << r.factored_bytes << " B";
    if (r.l_expanded && r.expanded_bytes > 0) {
        out << ", expanded " << r.expanded_bytes << " B, ratio "
            << static_cast<double>(r.factored_bytes) /
                   static_cast<double>(r.expanded_bytes);
    }
    out << "\n";
    if (timings) {
        const auto& t = r.timings;
        out << "timings: reduce " << t.reduce << "s, right " << t.right
            << "s, split " << t.split << "s, components " << t.components
            << "s, combine " << t.combine << "s\n";
    }
    return out.str();
}

// Sums a(n) for N consecutive n, starting at the first point where the
// summand is defined across the whole k-range.
hyptel::SeqWindow collect_sums(const hyptel::TermSpec& spec,
                               const hyptel::KRange& kr, long count) {
    long start = 0;
    for (; start < 64; ++start) {
        try {
            hyptel::sum_sequence(spec, kr, start, start);
            break;
        } catch (const hyptel::PoleAtPoint&) {
        }
    }
    if (start == 64) {
        throw hyptel::PoleAtPoint(
            "no pole-free starting point for the sum below n=64");
    }
    return hyptel::sum_sequence(spec, kr, start, start + count - 1);
}

hyptel::VerificationReport verify_result(const hyptel::TermSpec& spec,
                                         const hyptel::KRange& kr,
                                         const hyptel::TelescoperResult& r,
                                         long count) {
    hyptel::VerificationReport rep;
    hyptel::SeqWindow sums = collect_sums(spec, kr, count);
    hyptel::CheckResult minimal = hyptel::check_annihilates(r.l_min, sums);
    minimal.name = "minimal_annihilates";
    rep.checks.push_back(std::move(minimal));
    if (r.l_expanded) {
        hyptel::CheckResult full =
            hyptel::check_annihilates(*r.l_expanded, sums);
        full.name = "expanded_annihilates";
        rep.checks.push_back(std::move(full));
    }
    if (r.certificate && r.l_expanded) {
        rep.checks.push_back(hyptel::check_certificate(
            *r.l_expanded, *r.certificate, hyptel::certificates(spec)));
        rep.checks.push_back(hyptel::check_certificate_poles(
            *r.certificate, spec, kr, sums.first(), sums.last()));
    }
    return rep;
}

int cmd_telescope(const CommonOpts& o, const hyptel::TelescopeOptions& topt,
                  bool timings, bool minimal_only, long verify_n) {
    hyptel::TermInput in = resolve_input(o);
    hyptel::TelescopeOptions opt = topt;
    if (verify_n > 0) opt.expanded = true;
    hyptel::TelescoperResult res = hyptel::telescope(in.spec, opt);
    std::optional<hyptel::VerificationReport> rep;
    if (verify_n > 0) {
        rep = verify_result(in.spec, in.k_range, res, verify_n);
    }
    if (o.format == "json") {
        json j = telescoper_json(res, timings);
        if (rep) j["verification"] = rep->to_json();
        emit(o, j.dump(2) + "\n");
    } else {
        std::string text = telescoper_text(res, timings, minimal_only);
        if (rep) text += rep->to_string();
        emit(o, text);
    }
    return rep && !rep->passed() ? 1 : 0;
}

int cmd_verify(const CommonOpts& o, const std::string& op_text,
               const std::string& result_file, long count) {
    hyptel::TermInput in = resolve_input(o);
    hyptel::VerificationReport rep;
    if (!result_file.empty()) {
        std::ifstream f(result_file);
        if (!f) {
            throw InvalidInput("cannot open result file: " + result_file);
        }
        json j = json::parse(f, nullptr, true, true);
        hyptel::OreOp l_min = hyptel::OreOp::from_json(j.at("l_min"));
        hyptel::OreOp l_left = hyptel::OreOp::from_json(j.at("l_left"));
        hyptel::OreOp right =
            hyptel::OreOp::from_json(j.at("right_factor").at("op"));
        hyptel::SeqWindow sums = collect_sums(in.spec, in.k_range, count);
        hyptel::CheckResult minimal = hyptel::check_annihilates(l_min, sums);
        minimal.name = "minimal_annihilates";
        rep.checks.push_back(std::move(minimal));
        hyptel::OreOp product = (l_left * right).normalized();
        if (j.contains("l_expanded")) {
            hyptel::OreOp expanded =
                hyptel::OreOp::from_json(j.at("l_expanded"));
            hyptel::CheckResult structure;
            structure.name = "factored_matches_expanded";
            structure.range = "l_left * right_factor vs l_expanded";
            structure.pass = product == expanded;
            if (!structure.pass) structure.witness = "operator mismatch";
            rep.checks.push_back(std::move(structure));
        }
        hyptel::CheckResult full = hyptel::check_annihilates(product, sums);
        full.name = "expanded_annihilates";
        rep.checks.push_back(std::move(full));
        if (j.contains("certificate")) {
            hyptel::TermSpec cert_spec =
                hyptel::parse_term(j.at("certificate").get<std::string>());
            if (!cert_spec.factors.empty()) {
                throw InvalidInput("certificate entry is not a pure rational "
                                   "function");
            }
            rep.checks.push_back(hyptel::check_certificate(
                product, cert_spec.prefactor, hyptel::certificates(in.spec)));
            rep.checks.push_back(hyptel::check_certificate_poles(
                cert_spec.prefactor, in.spec, in.k_range, sums.first(),
                sums.last()));
        }
    } else if (!op_text.empty()) {
        hyptel::OreOp op = hyptel::parse_op(op_text);
        hyptel::SeqWindow sums = collect_sums(in.spec, in.k_range, count);
        hyptel::CheckResult ann = hyptel::check_annihilates(op, sums);
        ann.name = "annihilates";
        rep.checks.push_back(std::move(ann));
    } else {
        throw InvalidInput("one of --op or --result is required");
    }
    if (o.format == "json") {
        emit(o, rep.to_json().dump(2) + "\n");
    } else {
        emit(o, rep.to_string());
    }
    return rep.passed() ? 0 : 1;
}

int cmd_reduce(const CommonOpts& o) {
    hyptel::TermInput in = resolve_input(o);
    hyptel::HTerm h = hyptel::certificates(in.spec);
    hyptel::APReduction ap = hyptel::ap_shift_reduce(h);
    hyptel::ReductionContext ctx(ap.h0);
    const auto& basis = ctx.basis();
    if (o.format == "json") {
        json degs = json::array();
        for (int d : basis.degrees) degs.push_back(d);
        json j{{"term", in.spec.to_string()},
               {"kernel", ap.h0.spec.to_string()},
               {"prefactor_ratio", ap.r0.to_string()},
               {"dim", basis.dim},
               {"degrees", std::move(degs)}};
        emit(o, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "term: " << in.spec.to_string() << "\n";
        out << "kernel: " << ap.h0.spec.to_string() << "\n";
        out << "prefactor ratio: " << ap.r0.to_string() << "\n";
        out << "dimension: " << basis.dim << "\n";
        out << "section degrees:";
        for (int d : basis.degrees) out << " " << d;
        out << "\n";
        emit(o, out.str());
    }
    return 0;
}

int cmd_guess(const CommonOpts& o, int max_order, int max_degree) {
    hyptel::TermInput in = resolve_input(o);
    long need = static_cast<long>(max_order + 1) * (max_degree + 2) +
                max_order + 10;
    hyptel::SeqWindow sums = collect_sums(in.spec, in.k_range, need);
    auto op = hyptel::guess_recurrence(sums, max_order, max_degree);
    if (o.format == "json") {
        json j{{"term", in.spec.to_string()},
               {"window", {{"from", sums.first()}, {"to", sums.last()}}},
               {"max_order", max_order},
               {"max_degree", max_degree}};
        j["recurrence"] = op ? op->to_json() : json(nullptr);
        emit(o, j.dump(2) + "\n");
    } else if (op) {
        emit(o, op->to_string() + "\n");
    } else {
        emit(o, "no recurrence found within order " +
                    std::to_string(max_order) + ", degree " +
                    std::to_string(max_degree) + "\n");
    }
    return 0;
}

const std::map<std::string, std::string>& bench_examples() {
    static const std::map<std::string, std::string> ex{
        {"rational", "binomial(n,k)/(n+k+1)"},
        {"single", "binomial(n,k)^3/(2*n+3*k)"},
        {"seventh", "binomial(n,k)^7/(2*n+3*k)"},
        {"triple", "binomial(3*n,3*k)^2*binomial(3*n,3*k+1)"},
        {"fifth-power", "binomial(n,k)^5"},
    };
    return ex;
}

int cmd_bench(const CommonOpts& o, const std::vector<std::string>& names) {
    std::vector<std::string> run = names;
    if (run.empty()) run = {"rational", "single"};
    json rows = json::array();
    std::ostringstream text;
    for (const std::string& name : run) {
        auto it = bench_examples().find(name);
        if (it == bench_examples().end()) {
            throw InvalidInput("unknown bench example: " + name);
        }
        hyptel::TelescopeOptions opt;
        opt.expanded = true;
        hyptel::TelescoperResult r =
            hyptel::telescope(hyptel::parse_term(it->second), opt);
        const auto& t = r.timings;
        double total =
            t.reduce + t.right + t.split + t.components + t.combine;
        rows.push_back(telescoper_json(r, true));
        rows.back()["name"] = name;
        rows.back()["total_seconds"] = total;
        text << name << ": dim " << r.dim << ", orders R="
             << r.right.op.order() << " left=" << r.l_left.order()
             << " min=" << r.l_min.order() << ", factored "
             << r.factored_bytes << " B, expanded " << r.expanded_bytes
             << " B, total " << total << "s\n";
    }
    if (o.format == "json") {
        emit(o, rows.dump(2) + "\n");
    } else {
        emit(o, text.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"telescopers for bivariate hypergeometric sums in factored "
                 "form"};
    app.require_subcommand(1);

    CommonOpts to;
    bool t_expanded = false, t_factored = false, t_minimal = false;
    bool t_no_symmetry = false, t_certificate = false, t_timings = false;
    long t_verify = 0;
    int t_degree_cap = 0;
    CLI::App* tele = app.add_subcommand(
        "telescope", "compute the factored telescoper of a term");
    add_common(tele, to);
    tele->add_flag("--factored", t_factored,
                   "report the factored form (default)");
    tele->add_flag("--expanded", t_expanded,
                   "also multiply out the full telescoper");
    tele->add_flag("--minimal", t_minimal,
                   "print only the minimal recurrence (text mode)");
    tele->add_flag("--no-symmetry", t_no_symmetry,
                   "skip the symmetry splitting");
    tele->add_flag("--certificate", t_certificate,
                   "assemble the telescoping certificate");
    tele->add_option("--verify", t_verify,
                     "check the result against this many sums");
    tele->add_option("--degree-cap", t_degree_cap,
                     "cap for the reduction ansatz degree (0 = automatic)");
    tele->add_flag("--timings", t_timings, "report per-stage timings");

    CommonOpts vo;
    std::string v_op, v_result;
    long v_count = 20;
    CLI::App* ver = app.add_subcommand(
        "verify", "check an operator or a saved result against the sums");
    add_common(ver, vo);
    ver->add_option("--op", v_op, "operator text to check");
    ver->add_option("--result", v_result,
                    "JSON result file produced by telescope --out");
    ver->add_option("--n", v_count, "number of sums to check (default 20)");

    CommonOpts ro;
    CLI::App* red = app.add_subcommand(
        "reduce", "print the shift-reduced kernel and section basis");
    add_common(red, ro, false);

    CommonOpts go;
    int g_order = 5, g_degree = 8;
    CLI::App* gue = app.add_subcommand(
        "guess", "fit a recurrence to the sums by linear algebra");
    add_common(gue, go);
    gue->add_option("--max-order", g_order, "largest order tried (default 5)");
    gue->add_option("--max-degree", g_degree,
                    "largest coefficient degree tried (default 8)");

    CommonOpts bo;
    std::vector<std::string> b_names;
    CLI::App* ben = app.add_subcommand(
        "bench", "run the bundled examples and report timings");
    ben->add_option("--format", bo.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    ben->add_option("--out", bo.out_file, "write the report to a file");
    ben->add_option("examples", b_names,
                    "example names (rational, single, seventh, triple, "
                    "fifth-power)");

    CLI11_PARSE(app, argc, argv);

    const CommonOpts* active = &to;
    try {
        if (tele->parsed()) {
            active = &to;
            hyptel::TelescopeOptions opt;
            opt.symmetry = !t_no_symmetry;
            opt.certificate = t_certificate;
            opt.expanded = t_expanded;
            opt.degree_cap = t_degree_cap;
            return cmd_telescope(to, opt, t_timings, t_minimal, t_verify);
        }
        if (ver->parsed()) {
            active = &vo;
            return cmd_verify(vo, v_op, v_result, v_count);
        }
        if (red->parsed()) {
            active = &ro;
            return cmd_reduce(ro);
        }
        if (gue->parsed()) {
            active = &go;
            return cmd_guess(go, g_order, g_degree);
        }
        active = &bo;
        return cmd_bench(bo, b_names);
    } catch (const Error& e) {
        report_error(*active, e);
        return fail_code(e);
    } catch (const json::exception& e) {
        InvalidInput wrapped(std::string("malformed JSON input: ") + e.what());
        report_error(*active, wrapped);
        return 2;
    }
}
