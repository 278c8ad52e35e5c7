#include "evmigrate/bench.hpp"

#include "evmigrate/codec.hpp"
#include "evmigrate/error.hpp"

#include <chrono>
#include <cstdio>

namespace evmigrate {

namespace {

constexpr std::string_view fixture = R"(obj person1 Person
  name Alice
  age 23
obj person2 Person
  name Bob
  age 31
obj dog1 Dog
  name Rex
  age 4
  owner person1
obj dog2 Dog
  name Fifi
  age 2
  owner person2
)";

constexpr std::string_view mutation = "set dog1 name Rex II\n";

} // namespace

std::string_view bench_fixture_text()
{
    return fixture;
}

std::string_view bench_mutation_text()
{
    return mutation;
}

BenchReport run_bench(const Scenario& scenario, std::size_t iterations, ReferenceYear year)
{
    if (iterations == 0)
        throw Error("bench needs at least one iteration");
    const auto input = decode_model(fixture, scenario.m1_schema);
    const auto mutations = parse_mutations(mutation);

    std::optional<std::string> last_name;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < iterations; ++i) {
        MigrationSession session(scenario, year);
        session.migrate_forward(input);
        apply_mutations(session.m2().model(), mutations);
        const auto& back = session.migrate_backward();
        if (i + 1 == iterations)
            last_name = back.at("dog1").get_string("name");
    }
    const auto stop = std::chrono::steady_clock::now();

    if (last_name != "Rex II")
        throw Error("bench cycle lost the M2 modification");

    BenchReport report;
    report.scenario = scenario.name;
    report.iterations = iterations;
    report.total_seconds = std::chrono::duration<double>(stop - start).count();
    report.per_iteration_micros = report.total_seconds * 1e6 / static_cast<double>(iterations);
    return report;
}

std::string format_bench_line(const BenchReport& report)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "bench scenario=%s iterations=%zu total_s=%.6f per_iter_us=%.3f",
                  report.scenario.c_str(), report.iterations, report.total_seconds, report.per_iteration_micros);
    return buf;
}

} // namespace evmigrate
