#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qfa/document.hpp"
#include "qfa/regular.hpp"
#include "qfa/transforms.hpp"

using namespace qfa;

namespace {

double default_tolerance() {
    if (const char* env = std::getenv("QFA_DEFAULT_TOL")) {
        try {
            return std::stod(env);
        } catch (...) {
            throw Error("QFA_DEFAULT_TOL is not a number");
        }
    }
    return 1e-9;
}

int cmd_validate(const std::string& path, double tol) {
    MachineDocument doc = load_machine(path, tol);
    std::cout << "valid " << to_string(doc.kind) << ": " << doc.state_count() << " states, "
              << doc.input_alphabet().size() << " input symbols, backend "
              << to_string(doc.backend()) << "\n";
    return 0;
}

int cmd_sim(const std::string& path, const std::string& word_text, bool trace, double tol) {
    MachineDocument doc = load_machine(path, tol);
    Word w = parse_word_text(word_text, doc.input_alphabet());
    Scalar value;
    switch (doc.kind) {
        case MachineKind::blm:
            value = word_function(doc.blm(), w);
            break;
        case MachineKind::dfa:
            value = Scalar::exact_int(doc.dfa().accepts(w) ? 1 : 0);
            break;
        case MachineKind::mo1qfa:
            value = mo_accept_prob(doc.mo(), w);
            break;
        case MachineKind::mm1qfa: {
            if (trace) {
                std::vector<MmStep> steps;
                value = mm_accept_prob_traced(doc.mm(), w, steps);
                for (std::size_t i = 0; i < steps.size(); ++i)
                    std::cout << "step " << i + 1 << " '" << steps[i].symbol
                              << "': accept += " << steps[i].accept_mass.str()
                              << ", reject += " << steps[i].reject_mass.str()
                              << ", continue norm^2 = " << steps[i].continue_norm_sq.str() << "\n";
            } else {
                value = mm_accept_prob(doc.mm(), w);
            }
            break;
        }
        case MachineKind::cl1qfa:
            try {
                value = cl_accept_prob_bruteforce(doc.cl(), w);
            } catch (const CapExceeded& e) {
                throw Error(std::string(e.what()) +
                            " (hint: `qfa transform --to blm` and sim the reduced machine)");
            }
            break;
    }
    if (trace && doc.kind != MachineKind::mm1qfa)
        std::cerr << "note: --trace is only meaningful for mm1qfa documents\n";
    std::cout << value.str() << "\n";
    return 0;
}

int cmd_equiv(const std::string& path_a, const std::string& path_b, const std::string& backend,
              double tol, int brute_bound, bool no_minimize, bool report_json) {
    MachineDocument a = load_machine(path_a, tol);
    MachineDocument b = load_machine(path_b, tol);
    if (a.kind != b.kind)
        throw Error(std::string("cannot compare a ") + to_string(a.kind) + " with a " +
                    to_string(b.kind));
    if (backend == "float") {
        a = a.to_float();
        b = b.to_float();
    } else if (backend == "exact") {
        if (a.backend() != Backend::exact || b.backend() != Backend::exact)
            throw Error("a float document cannot be promoted to the exact backend");
    }
    if (a.backend() != b.backend()) {
        std::cerr << "note: backends differ; comparing on the float backend\n";
        a = a.to_float();
        b = b.to_float();
    }

    EquivalenceVerdict v;
    if (brute_bound >= 0) {
        const std::size_t k = static_cast<std::size_t>(brute_bound);
        switch (a.kind) {
            case MachineKind::blm:
                v = k_equiv_bruteforce(a.blm(), b.blm(), k, tol);
                break;
            case MachineKind::dfa:
                v = k_equiv_bruteforce(a.dfa().to_linear(Backend::exact),
                                       b.dfa().to_linear(Backend::exact), k, tol);
                break;
            case MachineKind::mo1qfa:
                v = k_equiv_simulators(
                    a.input_alphabet(), [&](const Word& w) { return mo_accept_prob(a.mo(), w); },
                    [&](const Word& w) { return mo_accept_prob(b.mo(), w); }, k, tol);
                break;
            case MachineKind::mm1qfa:
                v = k_equiv_simulators(
                    a.input_alphabet(), [&](const Word& w) { return mm_accept_prob(a.mm(), w); },
                    [&](const Word& w) { return mm_accept_prob(b.mm(), w); }, k, tol);
                break;
            case MachineKind::cl1qfa:
                v = k_equiv_simulators(
                    a.input_alphabet(),
                    [&](const Word& w) { return cl_accept_prob_bruteforce(a.cl(), w); },
                    [&](const Word& w) { return cl_accept_prob_bruteforce(b.cl(), w); }, k, tol);
                break;
        }
    } else {
        switch (a.kind) {
            case MachineKind::blm:
                v = equiv_blm(a.blm(), b.blm(), tol);
                break;
            case MachineKind::dfa:
                v = equiv_blm(a.dfa().to_linear(Backend::exact),
                              b.dfa().to_linear(Backend::exact), tol);
                break;
            case MachineKind::mo1qfa:
                v = equiv_mo(a.mo(), b.mo(), tol);
                break;
            case MachineKind::mm1qfa:
                v = equiv_mm(a.mm(), b.mm(), tol);
                break;
            case MachineKind::cl1qfa:
                if (a.cl().control_regex || b.cl().control_regex)
                    std::cerr << "note: regex control languages go through subset construction, "
                                 "which can be exponential in the pattern length\n";
                v = equiv_cl(a.cl(), b.cl(), tol, !no_minimize);
                break;
        }
    }

    if (report_json) {
        std::cout << verdict_to_json(v).dump(2) << "\n";
    } else if (v.equivalent) {
        std::cout << "equivalent";
        if (brute_bound >= 0) std::cout << " up to length " << v.bound_used;
        std::cout << " (bound " << v.bound_used << ", basis dimension " << v.basis_dimension
                  << ", tol " << double_to_string(v.tolerance) << ")\n";
    } else {
        std::cout << "not equivalent: witness " << word_to_display(v.witness) << " (length "
                  << v.witness.size() << ")\n";
        std::cout << "  f1 = " << v.f1.str() << "\n";
        std::cout << "  f2 = " << v.f2.str() << "\n";
        std::cout << "  bound " << v.bound_used << ", basis dimension " << v.basis_dimension
                  << ", tol " << double_to_string(v.tolerance) << "\n";
    }
    return v.equivalent ? 0 : 1;
}

void print_report(const ReductionReport& r) {
    std::cout << "reduced " << r.input_kind << ": " << r.quantum_states << " quantum states";
    if (r.control_states)
        std::cout << ", control " << r.control_states << " states"
                  << (r.control_minimized ? " (minimized)" : " (as given)");
    std::cout << ", output " << r.output_states << " states, backend " << to_string(r.backend)
              << "\n";
}

int cmd_transform(const std::string& path, const std::string& to, const std::string& out,
                  bool no_minimize, double tol) {
    MachineDocument doc = load_machine(path, tol);
    MachineDocument result;
    ReductionReport report;
    if (to == "cl") {
        if (doc.kind != MachineKind::mm1qfa) throw Error("--to cl expects an mm1qfa document");
        result.kind = MachineKind::cl1qfa;
        result.machine = mm_to_cl(doc.mm());
        report.input_kind = "mm1qfa";
        report.quantum_states = doc.state_count();
        report.control_states = 3;
        report.control_minimized = true;
        report.output_states = doc.state_count();
        report.backend = doc.backend();
    } else if (to == "rblm") {
        result.kind = MachineKind::blm;
        switch (doc.kind) {
            case MachineKind::mo1qfa:
                result.machine = mo_to_rblm(doc.mo(), &report);
                break;
            case MachineKind::mm1qfa:
                result.machine =
                    cl_to_rblm(mm_to_cl(doc.mm()), mm_acceptance_control_dfa(), &report);
                report.input_kind = "mm1qfa";
                report.control_minimized = true;
                break;
            case MachineKind::cl1qfa: {
                ClassicalDfa control =
                    no_minimize ? doc.cl().control : minimize_dfa(doc.cl().control);
                result.machine = cl_to_rblm(doc.cl(), control, &report);
                report.control_minimized = !no_minimize;
                break;
            }
            default:
                throw Error("--to rblm expects a quantum machine document");
        }
    } else if (to == "blm") {
        result.kind = MachineKind::blm;
        switch (doc.kind) {
            case MachineKind::mo1qfa:
                result.machine = mo_to_rblm(doc.mo(), &report);
                break;
            case MachineKind::mm1qfa:
                result.machine = pipeline_mm_to_blm(doc.mm(), &report);
                break;
            case MachineKind::cl1qfa:
                result.machine = pipeline_cl_to_blm(doc.cl(), !no_minimize, &report);
                break;
            default:
                throw Error("--to blm expects a quantum machine document");
        }
    } else {
        throw Error("--to must be one of cl, rblm, blm");
    }
    result.name = doc.name;
    save_machine_file(result, out);
    print_report(report);
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_minimize(const std::string& path, const std::string& out, double tol) {
    MachineDocument doc = load_machine(path, tol);
    if (doc.kind != MachineKind::dfa) throw Error("minimize expects a dfa document");
    MachineDocument result = doc;
    result.machine = minimize_dfa(doc.dfa());
    save_machine_file(result, out);
    std::cout << "minimized: " << doc.state_count() << " states -> " << result.state_count()
              << " states\n";
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equivalence toolkit for one-way quantum finite automata"};
    app.require_subcommand(1);

    double tol = -1.0;  // resolved after parsing so the env default applies
    std::string path_a, path_b, word_text, backend, to, out;
    bool trace = false, no_minimize = false, report_json = false;
    int brute_bound = -1;

    auto* validate = app.add_subcommand("validate", "parse and validate a machine document");
    validate->add_option("file", path_a, "machine document")->required();

    auto* sim = app.add_subcommand("sim", "acceptance probability of a word");
    sim->add_option("file", path_a, "machine document")->required();
    sim->add_option("--word", word_text, "input word over the machine's input alphabet")
        ->required();
    sim->add_flag("--trace", trace, "print per-step measurement masses (mm1qfa)");

    auto* equiv = app.add_subcommand("equiv", "decide equivalence of two machines");
    equiv->add_option("a", path_a, "first machine document")->required();
    equiv->add_option("b", path_b, "second machine document")->required();
    equiv->add_option("--backend", backend, "force a backend: exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    equiv->add_option("--tol", tol, "rank and value tolerance (default 1e-9)");
    equiv->add_option("--brute-bound", brute_bound,
                      "compare by brute force over words up to this length instead");
    equiv->add_flag("--no-minimize", no_minimize, "keep control DFAs as given (cl1qfa)");
    equiv->add_flag("--report", report_json, "emit the verdict as JSON");

    auto* transform = app.add_subcommand("transform", "reduce a quantum machine");
    transform->add_option("file", path_a, "machine document")->required();
    transform->add_option("--to", to, "target: cl, rblm or blm")->required();
    transform->add_option("--out", out, "output path")->required();
    transform->add_flag("--no-minimize", no_minimize, "keep the control DFA as given");

    auto* minimize = app.add_subcommand("minimize", "minimize a dfa document");
    minimize->add_option("file", path_a, "dfa document")->required();
    minimize->add_option("--out", out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (tol < 0) tol = default_tolerance();
        if (validate->parsed()) return cmd_validate(path_a, tol);
        if (sim->parsed()) return cmd_sim(path_a, word_text, trace, tol);
        if (equiv->parsed())
            return cmd_equiv(path_a, path_b, backend, tol, brute_bound, no_minimize, report_json);
        if (transform->parsed()) return cmd_transform(path_a, to, out, no_minimize, tol);
        if (minimize->parsed()) return cmd_minimize(path_a, out, tol);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
