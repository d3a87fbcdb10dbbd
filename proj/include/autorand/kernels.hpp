#pragma once

// OpenMP kernels for the embarrassingly parallel workloads: transition
// audits, brute-force slice counts and batches of independent runs. Each
// kernel has a serial twin with identical results.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorand/engine.hpp"

namespace autorand::kernels {

AuditReport audit_transitions(const Setup& d, std::span<const MState> states,
                              std::span<const Word> probes);

/// counts[n] = |L(d) ∩ letters^n| by enumerating every word, n <= max_len.
std::vector<BigInt> slice_counts_bruteforce(const Dfa& d, std::size_t max_len);

struct BatchJob {
    std::function<Stream()> make_stream;
    std::size_t steps = 0;
};

struct BatchResult {
    std::optional<CapitalTrace> trace;
    std::string error;
};

std::vector<BatchResult> run_batch(const Setup& d, std::span<const BatchJob> jobs,
                                   const RunOptions& opts = {});

namespace serial {

AuditReport audit_transitions(const Setup& d, std::span<const MState> states,
                              std::span<const Word> probes);
std::vector<BigInt> slice_counts_bruteforce(const Dfa& d, std::size_t max_len);
std::vector<BatchResult> run_batch(const Setup& d, std::span<const BatchJob> jobs,
                                   const RunOptions& opts = {});

}  // namespace serial

}  // namespace autorand::kernels
