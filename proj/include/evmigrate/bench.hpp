#pragma once

#include "evmigrate/commands.hpp"
#include "evmigrate/metamodel.hpp"
#include "evmigrate/sync.hpp"

#include <cstddef>
#include <string>

namespace evmigrate {

struct BenchReport {
    std::string scenario;
    std::size_t iterations = 0;
    double total_seconds = 0.0;
    double per_iteration_micros = 0.0;
};

/// Two persons and two dogs, M1 schema.
std::string_view bench_fixture_text();
/// Applied to the M2 side once per cycle.
std::string_view bench_mutation_text();

/// Runs `iterations` full cycles: fresh session, forward, one M2 mutation,
/// backward. Throws Error if iterations is 0 or a cycle loses the mutation.
BenchReport run_bench(const Scenario& scenario, std::size_t iterations, ReferenceYear year = {});

/// `bench scenario=<s> iterations=<n> total_s=<t> per_iter_us=<u>`
std::string format_bench_line(const BenchReport& report);

} // namespace evmigrate
