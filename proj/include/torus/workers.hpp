#pragma once

// Bounded fan-out for independent jobs (epsilon/seed sweeps).

#include <cstddef>
#include <functional>

namespace torus {

/// Worker cap: TORUS_EULER_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_limit();

/// Runs job(i) for i in [0, count) on at most `workers` threads. The first
/// exception thrown by a job is rethrown after all workers have stopped.
void run_jobs(std::size_t count, const std::function<void(std::size_t)>& job, int workers = worker_limit());

}  // namespace torus
