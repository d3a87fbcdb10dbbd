#include "autorand/kernels.hpp"

#include <omp.h>

namespace autorand::kernels {

namespace {

// Probe slot 0 is the pause; slot i > 0 is probes[i - 1].
TextItem probe_at(std::span<const Word> probes, std::size_t slot) {
    if (slot == 0) return std::nullopt;
    return probes[slot - 1];
}

Word word_of_index(const std::string& letters, std::size_t n, std::uint64_t index) {
    Word w(n, letters[0]);
    std::uint64_t m = letters.size();
    for (std::size_t i = n; i-- > 0;) {
        w[i] = letters[index % m];
        index /= m;
    }
    return w;
}

std::uint64_t words_of_length(std::size_t m, std::size_t n) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    return total;
}

void check_bruteforce_args(const Dfa& d, std::size_t max_len) {
    if (d.arity() != 1) throw ArityMismatch("slice counts need a plain-word automaton");
    long double total = 1;
    for (std::size_t i = 0; i < max_len; ++i) total *= d.letters().size();
    if (total > 1e9L) throw PreconditionError("brute-force enumeration too large");
}

BatchResult run_job(const Setup& d, const BatchJob& job, const RunOptions& opts) {
    BatchResult r;
    try {
        Stream z = job.make_stream();
        r.trace = run(d, z, job.steps, opts).trace;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace

AuditReport audit_transitions(const Setup& d, std::span<const MState> states,
                              std::span<const Word> probes) {
    const std::size_t slots = probes.size() + 1;
    const long long total = static_cast<long long>(states.size() * slots);
    std::vector<std::vector<Violation>> found(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 16)
    for (long long k = 0; k < total; ++k) {
        auto i = static_cast<std::size_t>(k) / slots;
        auto j = static_cast<std::size_t>(k) % slots;
        found[static_cast<std::size_t>(k)] = check_transition(d, states[i], probe_at(probes, j));
    }
    AuditReport report;
    report.transitions = static_cast<std::size_t>(total);
    for (auto& v : found) {
        for (auto& x : v) report.violations.push_back(std::move(x));
    }
    return report;
}

std::vector<BigInt> slice_counts_bruteforce(const Dfa& d, std::size_t max_len) {
    check_bruteforce_args(d, max_len);
    std::vector<BigInt> counts;
    for (std::size_t n = 0; n <= max_len; ++n) {
        auto total = static_cast<long long>(words_of_length(d.letters().size(), n));
        long long hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
        for (long long k = 0; k < total; ++k) {
            if (d.accepts(word_of_index(d.letters(), n, static_cast<std::uint64_t>(k)))) ++hits;
        }
        counts.emplace_back(static_cast<long>(hits));
    }
    return counts;
}

std::vector<BatchResult> run_batch(const Setup& d, std::span<const BatchJob> jobs,
                                   const RunOptions& opts) {
    std::vector<BatchResult> out(jobs.size());
    const auto n = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long long k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = run_job(d, jobs[static_cast<std::size_t>(k)], opts);
    }
    return out;
}

namespace serial {

AuditReport audit_transitions(const Setup& d, std::span<const MState> states,
                              std::span<const Word> probes) {
    AuditReport report;
    for (const MState& s : states) {
        for (std::size_t j = 0; j <= probes.size(); ++j) {
            ++report.transitions;
            for (auto& v : check_transition(d, s, probe_at(probes, j))) {
                report.violations.push_back(std::move(v));
            }
        }
    }
    return report;
}

std::vector<BigInt> slice_counts_bruteforce(const Dfa& d, std::size_t max_len) {
    check_bruteforce_args(d, max_len);
    std::vector<BigInt> counts;
    for (std::size_t n = 0; n <= max_len; ++n) {
        std::uint64_t total = words_of_length(d.letters().size(), n);
        long hits = 0;
        for (std::uint64_t k = 0; k < total; ++k) {
            if (d.accepts(word_of_index(d.letters(), n, k))) ++hits;
        }
        counts.emplace_back(hits);
    }
    return counts;
}

std::vector<BatchResult> run_batch(const Setup& d, std::span<const BatchJob> jobs,
                                   const RunOptions& opts) {
    std::vector<BatchResult> out;
    for (const auto& job : jobs) out.push_back(run_job(d, job, opts));
    return out;
}

}  // namespace serial

}  // namespace autorand::kernels
