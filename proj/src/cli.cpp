#include "evmigrate/cli.hpp"

#include "evmigrate/bench.hpp"
#include "evmigrate/check.hpp"
#include "evmigrate/codec.hpp"
#include "evmigrate/error.hpp"
#include "evmigrate/sync.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace evmigrate {

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path);
    out << contents;
    if (!out.flush())
        throw Error("failed writing " + path);
}

// Prefixes parse errors with the file they came from.
template <typename Fn>
auto in_file(const std::string& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const ParseError& e) {
        throw Error(path + ":" + std::to_string(e.line()) + ": " + e.message());
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

SchemaPtr load_schema_file(const std::string& path)
{
    const auto source = read_file(path);
    return in_file(path, [&] { return load_schema_ptr(source, path); });
}

InstanceModel load_model_file(const std::string& path, SchemaPtr schema)
{
    const auto source = read_file(path);
    return in_file(path, [&] { return decode_model(source, std::move(schema)); });
}

struct MigrationArgs {
    std::string m1_schema;
    std::string m2_schema;
    std::string input;
    std::string out;
    std::string log;
    std::string mutations;
    int year = ReferenceYear::default_year;
};

void add_migration_options(CLI::App& cmd, MigrationArgs& args)
{
    cmd.add_option("--m1-schema", args.m1_schema, "M1 schema file")->required();
    cmd.add_option("--m2-schema", args.m2_schema, "M2 schema file")->required();
    cmd.add_option("--input", args.input, "M1 instance file")->required();
    cmd.add_option("--out", args.out, "Output instance file")->required();
    cmd.add_option("--year", args.year, "Reference year for age/ybirth conversion")
        ->envname("EVMIGRATE_YEAR")
        ->check(CLI::PositiveNumber);
}

int cmd_migrate(const MigrationArgs& args, std::ostream& out)
{
    const auto m1 = load_schema_file(args.m1_schema);
    const auto m2 = load_schema_file(args.m2_schema);
    auto input = load_model_file(args.input, m1);

    MigrationSession session(m1, m2, ReferenceYear(args.year));
    const auto& result = session.migrate_forward(std::move(input));
    write_file(args.out, encode_model(result));
    if (!args.log.empty())
        write_file(args.log, session.last_transfer());
    out << "migrated " << result.size() << " objects to " << args.out << "\n";
    return 0;
}

int cmd_roundtrip(const MigrationArgs& args, std::ostream& out)
{
    const auto m1 = load_schema_file(args.m1_schema);
    const auto m2 = load_schema_file(args.m2_schema);
    auto input = load_model_file(args.input, m1);
    const auto script = read_file(args.mutations);

    MigrationSession session(m1, m2, ReferenceYear(args.year));
    session.migrate_forward(std::move(input));
    in_file(args.mutations, [&] {
        apply_mutations(session.m2().model(), script);
        return 0;
    });
    const auto& result = session.migrate_backward();
    write_file(args.out, encode_model(result));
    out << "round trip wrote " << result.size() << " objects to " << args.out << "\n";
    return 0;
}

struct CheckArgs {
    std::size_t cases = 100;
    std::uint64_t seed = 1;
    std::size_t max_commands = 5;
    int year = ReferenceYear::default_year;
};

int cmd_check(const CheckArgs& args, std::ostream& out)
{
    CheckOptions options;
    options.cases = args.cases;
    options.seed = args.seed;
    options.max_commands = args.max_commands;
    options.year = ReferenceYear(args.year);

    const auto start = std::chrono::steady_clock::now();
    const auto report = run_checks(options);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    out << format_report(report, options);
    char timing[64];
    std::snprintf(timing, sizeof timing, "timing total_s=%.3f", elapsed);
    out << timing << "\n";
    return report.passed() ? 0 : 1;
}

struct BenchArgs {
    std::size_t iterations = 10000;
    std::string scenario = "ybirth";
    int year = ReferenceYear::default_year;
};

int cmd_bench(const BenchArgs& args, std::ostream& out)
{
    const auto report = run_bench(bundled_scenario(args.scenario), args.iterations, ReferenceYear(args.year));
    out << format_bench_line(report) << "\n";
    char summary[160];
    std::snprintf(summary, sizeof summary, "%s: %zu forward/mutate/backward cycles in %.3f s (%.1f us per cycle)",
                  report.scenario.c_str(), report.iterations, report.total_seconds, report.per_iteration_micros);
    out << summary << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Event-sourced bidirectional model migration", "evmigrate"};
    app.require_subcommand(1);

    MigrationArgs migrate_args;
    auto* migrate = app.add_subcommand("migrate", "Migrate an M1 instance file to M2");
    add_migration_options(*migrate, migrate_args);
    migrate->add_option("--log", migrate_args.log, "Write the transferred command log here");

    MigrationArgs roundtrip_args;
    auto* roundtrip = app.add_subcommand("roundtrip", "Migrate forward, apply M2 mutations, migrate back");
    add_migration_options(*roundtrip, roundtrip_args);
    roundtrip->add_option("--mutations", roundtrip_args.mutations, "Mutation script applied to the M2 model")
        ->required();

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Run the randomized law and round-trip checks");
    check->add_option("--cases", check_args.cases, "Number of random cases")->capture_default_str();
    check->add_option("--seed", check_args.seed, "Random seed")->capture_default_str();
    check->add_option("--max-commands", check_args.max_commands, "Largest command set in commutativity checks")
        ->check(CLI::Range(1, 10))
        ->capture_default_str();
    check->add_option("--year", check_args.year, "Reference year")
        ->envname("EVMIGRATE_YEAR")
        ->check(CLI::PositiveNumber);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time full migration cycles on the pinned fixture");
    bench->add_option("--iterations", bench_args.iterations, "Number of cycles")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--scenario", bench_args.scenario, "Bundled scenario")
        ->check(CLI::IsMember(bundled_scenario_names()))
        ->capture_default_str();
    bench->add_option("--year", bench_args.year, "Reference year")
        ->envname("EVMIGRATE_YEAR")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (migrate->parsed())
            return cmd_migrate(migrate_args, out);
        if (roundtrip->parsed())
            return cmd_roundtrip(roundtrip_args, out);
        if (check->parsed())
            return cmd_check(check_args, out);
        return cmd_bench(bench_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace evmigrate
