#include "qfa/transforms.hpp"

#include "qfa/regular.hpp"

namespace qfa {

Cl1Qfa mm_to_cl(const Mm1Qfa& m) {
    Cl1Qfa out;
    out.input_alphabet = m.input_alphabet;
    out.pi = m.pi;
    out.unitaries = m.unitaries;
    out.observable = m.observable;
    out.control = mm_acceptance_control_dfa();
    out.control_regex = kMmAcceptanceControlRegex;
    return out;
}

BilinearMachine cl_to_rblm(const Cl1Qfa& m, const ClassicalDfa& control, ReductionReport* report) {
    if (control.alphabet != m.observable.results)
        throw Error("control dfa alphabet does not match the observable result list");
    const Backend b = m.backend();
    const std::size_t mq = m.state_count();
    const std::size_t k = control.state_count;
    const BilinearMachine control_linear = control.to_linear(b);

    BilinearMachine out;
    out.alphabet = m.working_alphabet();
    out.pi = kron(kron(m.pi, m.pi.entrywise_conj()), control_linear.pi);

    // One shared measurement factor: sum_c P(c) ⊗ conj(P(c)) ⊗ M(c).
    Matrix measure = Matrix::zeros(b, mq * mq * k, mq * mq * k);
    for (std::size_t c = 0; c < m.observable.results.size(); ++c) {
        const Matrix& p = m.observable.projectors[c];
        measure = measure + kron(kron(p, p.entrywise_conj()), control_linear.transition[c]);
    }
    const Matrix control_id = Matrix::identity(b, k);
    for (const auto& sym : out.alphabet) {
        const Matrix& u = m.unitary_for(sym);
        out.transition.push_back(
            mat_mul(kron(kron(u, u.entrywise_conj()), control_id), measure));
    }

    // eta' = sum_j e_j ⊗ e_j ⊗ xi: the control accept column placed on the
    // diagonal (j, j) quantum index pairs.
    out.eta = Matrix::zeros(b, mq * mq * k, 1);
    for (std::size_t j = 0; j < mq; ++j)
        for (std::size_t s = 0; s < k; ++s)
            if (control.accepting[s]) out.eta.set((j * mq + j) * k + s, 0, Scalar::one(b));

    out.certified_real = true;
    if (report) {
        report->input_kind = "cl1qfa";
        report->quantum_states = mq;
        report->control_states = k;
        report->output_states = out.state_count();
        report->backend = b;
    }
    return out;
}

BilinearMachine mo_to_rblm(const Mo1Qfa& m, ReductionReport* report) {
    const Backend b = m.backend();
    const std::size_t mq = m.state_count();

    BilinearMachine out;
    out.alphabet = m.alphabet;
    out.pi = kron(m.pi, m.pi.entrywise_conj());
    for (const Matrix& u : m.unitaries) out.transition.push_back(kron(u, u.entrywise_conj()));

    // ||v P(a)||^2 = sum_{i,j} v_i conj(v_j) P(a)_{ij}, so eta' is the accept
    // projector flattened row-major.
    const Matrix& pa = m.observable.projector_for(kAccept);
    out.eta = Matrix::zeros(b, mq * mq, 1);
    for (std::size_t i = 0; i < mq; ++i)
        for (std::size_t j = 0; j < mq; ++j) out.eta.set(i * mq + j, 0, pa.at(i, j));

    out.certified_real = true;
    if (report) {
        report->input_kind = "mo1qfa";
        report->quantum_states = mq;
        report->control_states = 0;
        report->output_states = out.state_count();
        report->backend = b;
    }
    return out;
}

BilinearMachine pipeline_mm_to_blm(const Mm1Qfa& m, ReductionReport* report) {
    BilinearMachine reduced = cl_to_rblm(mm_to_cl(m), mm_acceptance_control_dfa(), report);
    BilinearMachine out = strip_endmarker(reduced, kEndMarker);
    if (report) {
        report->input_kind = "mm1qfa";
        report->control_minimized = true;  // the built-in control is minimal
        report->output_states = out.state_count();
    }
    return out;
}

BilinearMachine pipeline_cl_to_blm(const Cl1Qfa& m, bool minimize_control,
                                   ReductionReport* report) {
    ClassicalDfa control = minimize_control ? minimize_dfa(m.control) : m.control;
    BilinearMachine reduced = cl_to_rblm(m, control, report);
    BilinearMachine out = strip_endmarker(reduced, kEndMarker);
    if (report) {
        report->control_minimized = minimize_control;
        report->output_states = out.state_count();
    }
    return out;
}

}  // namespace qfa
