// Command-line surface over the latline library: evaluate block functions
// and homomorphism descriptors, build the witness constructions, decide
// descriptor equivalence, run the certified checks, and emit CSV polylines.
//
// Exit status: 0 ok, 1 a check ran and failed, 2 parse error,
// 3 domain error (divergence, out of domain, ...), 4 precondition violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <latline/latline.hpp>

namespace {

using namespace latline;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::precondition, "FileError", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::precondition, "FileError", "cannot write '" + path + "'");
    out << content;
}

BlockFunction load_function(const std::string& path) { return parse_function_spec(read_file(path)); }

struct ScaleAndSetFlag {
    Rational c;
    EventuallyPeriodicSet set = EventuallyPeriodicSet::everything();
};

// "RAT,SETSPEC", e.g. "2,pre=;per=10"
ScaleAndSetFlag parse_scale_and_set(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw_parse("expected 'scale,setspec', got '" + s + "'");
    return {parse_rational(std::string_view(s).substr(0, comma)),
            parse_set_spec(std::string_view(s).substr(comma + 1))};
}

int run_equiv(const std::string& left_s, const std::string& right_s,
              const std::string& witness_out) {
    ScaleAndSetFlag l = parse_scale_and_set(left_s);
    ScaleAndSetFlag r = parse_scale_and_set(right_s);
    EquivalenceResult res = classify_equivalence({l.c, l.set}, {r.c, r.set});
    if (std::holds_alternative<Equivalent>(res)) {
        std::cout << "Equivalent\n";
    } else if (std::holds_alternative<ConsistentOverlap>(res)) {
        std::cout << "ConsistentOverlap\n";
    } else {
        const auto& sep = std::get<Separated>(res);
        std::cout << "Separated\n";
        std::cout << "left: " << left_s << "\n";
        std::cout << "right: " << right_s << "\n";
        std::cout << "left-value: " << sep.left_value << "\n";
        std::cout << "right-value: " << sep.right_value << "\n";
        if (!witness_out.empty()) {
            write_file(witness_out, format_function_spec(sep.witness));
            std::cout << "witness-file: " << witness_out << "\n";
        } else {
            std::cout << "witness:\n";
            std::istringstream lines(format_function_spec(sep.witness));
            for (std::string line; std::getline(lines, line);) std::cout << "  " << line << "\n";
        }
    }
    return 0;
}

int report_outcome(bool ok) {
    std::cout << "result: " << (ok ? "ok" : "failed") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact lattice calculus for Lipschitz functions on the half-line [1, infinity)"};
    app.require_subcommand(1);
    int status = 0;

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a function file at a rational point");
    std::string eval_fn, eval_t;
    eval_cmd->add_option("--fn", eval_fn, "function spec file")->required();
    eval_cmd->add_option("--t", eval_t, "evaluation point (rational)")->required();
    eval_cmd->callback([&] {
        BlockFunction f = load_function(eval_fn);
        std::cout << f.eval(parse_rational(eval_t)) << "\n";
    });

    // --- hom ---
    auto* hom_cmd = app.add_subcommand("hom", "apply a homomorphism descriptor to a function");
    std::string hom_spec, hom_fn;
    hom_cmd->add_option("--spec", hom_spec, "point:... or filter:... descriptor")->required();
    hom_cmd->add_option("--fn", hom_fn, "function spec file")->required();
    hom_cmd->callback([&] {
        HomSpec h = parse_hom_spec(hom_spec);
        BlockFunction f = load_function(hom_fn);
        std::cout << evaluate(h, f) << "\n";
    });

    // --- construct ---
    auto* construct = app.add_subcommand("construct", "build a witness function or interpolation");
    construct->require_subcommand(1);

    std::string c_set, c_out, c_c, c_d, c_left, c_right, c_seq;
    std::uint64_t c_horizon = 0;

    auto* c31 = construct->add_subcommand("sep31", "set witness: 2^n on the set, 0 off it");
    c31->add_option("--set", c_set)->required();
    c31->add_option("--out", c_out)->required();
    c31->callback([&] {
        BlockFunction f = set_witness_function(parse_set_spec(c_set));
        write_file(c_out, format_function_spec(f));
        std::cout << "written: " << c_out << "\n";
        std::cout << "lipschitz: " << lipschitz_constant(f) << "\n";
    });

    auto* c34 = construct->add_subcommand("sep34", "alternating two-scale witness with gap bound");
    c34->add_option("--c", c_c)->required();
    c34->add_option("--d", c_d)->required();
    c34->add_option("--set", c_set)->required();
    c34->add_option("--out", c_out)->required();
    c34->callback([&] {
        AlternatingWitness w = alternating_witness_function(parse_rational(c_c), parse_rational(c_d),
                                                            parse_set_spec(c_set));
        write_file(c_out, format_function_spec(w.function));
        std::cout << "written: " << c_out << "\n";
        std::cout << "gap-coefficient: " << w.certificate.coefficient << "\n";
        for (const auto& e : w.certificate.entries)
            std::cout << "n=" << e.n << ": gap=" << e.gap << " bound=" << e.bound
                      << (e.gap >= e.bound ? " ok" : " VIOLATED") << "\n";
        status = report_outcome(w.certificate.holds);
    });

    auto* csf = construct->add_subcommand("same-filter", "witness separating two scales");
    csf->add_option("--c", c_c)->required();
    csf->add_option("--d", c_d)->required();
    csf->add_option("--out", c_out)->required();
    csf->callback([&] {
        BlockFunction f = scale_witness_function(parse_rational(c_c), parse_rational(c_d));
        write_file(c_out, format_function_spec(f));
        std::cout << "written: " << c_out << "\n";
        std::cout << "lipschitz: " << lipschitz_constant(f) << "\n";
    });

    auto* csc = construct->add_subcommand("same-c", "witness separating two sets at one scale");
    csc->add_option("--c", c_c)->required();
    csc->add_option("--left-set", c_left)->required();
    csc->add_option("--right-set", c_right)->required();
    csc->add_option("--out", c_out)->required();
    csc->callback([&] {
        BlockFunction f = set_witness_function_at(parse_rational(c_c), parse_set_spec(c_left),
                                                  parse_set_spec(c_right));
        write_file(c_out, format_function_spec(f));
        std::cout << "written: " << c_out << "\n";
    });

    auto* ce = construct->add_subcommand("E", "interpolate an integer sequence on [1, horizon]");
    ce->add_option("--seq", c_seq)->required();
    ce->add_option("--horizon", c_horizon)->required();
    ce->add_option("--out", c_out)->required();
    ce->callback([&] {
        IntegerSequenceSpec g = parse_sequence_spec(read_file(c_seq));
        Polyline p = interpolate_integer_sequence(g, c_horizon);
        write_file(c_out, format_polyline_file(p));
        std::cout << "written: " << c_out << "\n";
        std::cout << "breakpoints: " << p.points().size() << "\n";
    });

    // --- equiv ---
    auto* equiv_cmd = app.add_subcommand("equiv", "decide whether two descriptors agree");
    std::string eq_left, eq_right, eq_witness_out;
    equiv_cmd->add_option("--left", eq_left, "scale,setspec")->required();
    equiv_cmd->add_option("--right", eq_right, "scale,setspec")->required();
    equiv_cmd->add_option("--witness-out", eq_witness_out, "write the separating witness here");
    equiv_cmd->callback([&] { status = run_equiv(eq_left, eq_right, eq_witness_out); });

    // --- check ---
    auto* check = app.add_subcommand("check", "run a certified check");
    check->require_subcommand(1);
    std::string k_spec, k_fn, k_g, k_c, k_d, k_set, k_left, k_right;
    std::uint64_t k_horizon = 0;

    auto* kax = check->add_subcommand("axioms", "homomorphism identities on a pair of functions");
    kax->add_option("--spec", k_spec)->required();
    kax->add_option("--f", k_fn)->required();
    kax->add_option("--g", k_g)->required();
    kax->callback([&] {
        HomSpec h = parse_hom_spec(k_spec);
        AxiomReport rep = check_axioms(h, load_function(k_fn), load_function(k_g));
        std::cout << "hom: " << format_hom_spec(h) << "\n";
        std::cout << "f: " << k_fn << "\n";
        std::cout << "g: " << k_g << "\n";
        std::cout << "coefficients: a=" << rep.coeff_a << " b=" << rep.coeff_b << "\n";
        for (const auto& c : rep.checks)
            std::cout << c.identity << ": " << (c.holds ? "ok" : "FAILED") << " [" << c.route
                      << "] " << c.detail << "\n";
        status = report_outcome(rep.all_hold());
    });

    auto* kseam = check->add_subcommand("seam", "validate a function file");
    kseam->add_option("--fn", k_fn)->required();
    kseam->callback([&] {
        // Parsing already validates; report the verdict on the raw text so
        // invalid files get a structured answer instead of an exception.
        std::string text = read_file(k_fn);
        try {
            BlockFunction f = parse_function_spec(text);
            std::cout << "fn: " << k_fn << "\n";
            std::cout << "drivers: " << f.drivers().size() << "\n";
            std::cout << "templates: " << f.templates().size() << "\n";
            status = report_outcome(true);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::precondition) throw;
            std::cout << "fn: " << k_fn << "\n";
            std::cout << "violation: " << e.what() << "\n";
            status = report_outcome(false);
        }
    });

    auto* kgap = check->add_subcommand("gap", "verify the alternating witness gap bound");
    kgap->add_option("--c", k_c)->required();
    kgap->add_option("--d", k_d)->required();
    kgap->add_option("--set", k_set)->required();
    kgap->callback([&] {
        AlternatingWitness w = alternating_witness_function(parse_rational(k_c), parse_rational(k_d),
                                                            parse_set_spec(k_set));
        std::cout << "gap-coefficient: " << w.certificate.coefficient << "\n";
        for (const auto& e : w.certificate.entries)
            std::cout << "n=" << e.n << ": gap=" << e.gap << " bound=" << e.bound
                      << (e.gap >= e.bound ? " ok" : " VIOLATED") << "\n";
        status = report_outcome(w.certificate.holds);
    });

    auto* kshift = check->add_subcommand("shift-identity",
                                         "limit at (2, A) equals limit at (1, 1+A)");
    kshift->add_option("--fn", k_fn)->required();
    kshift->add_option("--set", k_set)->required();
    kshift->callback([&] {
        BlockFunction f = load_function(k_fn);
        EventuallyPeriodicSet A = parse_set_spec(k_set);
        LimitValue at2 = filter_limit(hom_filter(1, 2, A), f);
        LimitValue at1 = filter_limit(hom_filter(1, 1, A.shift_forward(1)), f);
        std::cout << "fn: " << k_fn << "\n";
        std::cout << "set: " << format_set_spec(A) << "\n";
        std::cout << "limit-at-2: " << at2.describe() << "\n";
        std::cout << "limit-at-1-shifted: " << at1.describe() << "\n";
        status = report_outcome(at2 == at1);
    });

    auto* kcont = check->add_subcommand("continuity", "two-step continuity estimate");
    kcont->add_option("--fn", k_fn)->required();
    kcont->add_option("--c", k_c)->required();
    kcont->add_option("--d", k_d)->required();
    kcont->add_option("--left-set", k_left)->required();
    kcont->add_option("--right-set", k_right)->required();
    kcont->callback([&] {
        BlockFunction f = load_function(k_fn);
        ContinuityReport r =
            continuity_bound_check(f, parse_rational(k_c), parse_rational(k_d),
                                   parse_set_spec(k_left), parse_set_spec(k_right));
        std::cout << "left-value: " << r.left_value << "\n";
        std::cout << "right-value: " << r.right_value << "\n";
        std::cout << "difference: " << r.difference << "\n";
        std::cout << "eps: " << r.eps << "\n";
        std::cout << "lipschitz: " << r.lipschitz << "\n";
        std::cout << "bound: " << r.bound << "\n";
        status = report_outcome(r.holds);
    });

    auto* kegap = check->add_subcommand("e-gap", "interpolation defect stays under the Lipschitz constant");
    kegap->add_option("--fn", k_fn)->required();
    kegap->add_option("--horizon", k_horizon)->required();
    kegap->callback([&] {
        BlockFunction f = load_function(k_fn);
        Rational gap = interpolation_gap(f, k_horizon);
        Rational lip = lipschitz_constant(f);
        std::cout << "gap: " << gap << "\n";
        std::cout << "lipschitz: " << lip << "\n";
        status = report_outcome(gap <= lip);
    });

    // --- emit-polyline ---
    auto* emit = app.add_subcommand("emit-polyline", "render a function restriction as CSV");
    std::string e_fn, e_from, e_to, e_csv;
    unsigned e_precision = 6;
    emit->add_option("--fn", e_fn)->required();
    emit->add_option("--from", e_from)->required();
    emit->add_option("--to", e_to)->required();
    emit->add_option("--csv", e_csv, "write CSV here instead of stdout");
    emit->add_option("--precision", e_precision, "decimal digits (default 6)");
    emit->callback([&] {
        BlockFunction f = load_function(e_fn);
        Polyline p = f.restrict(parse_rational(e_from), parse_rational(e_to));
        std::string csv = polyline_to_csv(p, e_precision);
        if (e_csv.empty())
            std::cout << csv;
        else {
            write_file(e_csv, csv);
            std::cout << "written: " << e_csv << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: ParseError: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Error::exit_status(e.kind());
    }
    return status;
}
