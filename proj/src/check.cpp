#include "evmigrate/check.hpp"

#include "evmigrate/error.hpp"
#include "evmigrate/sync.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace evmigrate {

std::uint64_t case_seed(std::uint64_t seed, std::size_t index)
{
    if (index == 0)
        return seed;
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void default_execute(Editor& editor, const Command& cmd)
{
    editor.execute(cmd);
}

namespace {

constexpr std::array<std::string_view, 8> names{"Alice", "Bob", "Carol", "Rex", "Fifi", "Mr Rex", "", "Lassie"};

std::optional<std::string> random_name(Rng& rng)
{
    if (!rng.chance(80))
        return std::nullopt;
    return std::string(names[rng.below(names.size())]);
}

std::optional<std::int64_t> random_age(Rng& rng)
{
    if (!rng.chance(80))
        return std::nullopt;
    return rng.between(0, 150);
}

struct LawSchema {
    std::string label;
    SchemaPtr schema;
};

std::vector<LawSchema> law_schemas()
{
    return {
        {"m1", bundled_scenario("identity").m1_schema},
        {"ybirth", bundled_scenario("ybirth").m2_schema},
        {"dog-no-age", bundled_scenario("dog-no-age").m2_schema},
    };
}

Editor seeded_editor(const SchemaPtr& schema, const CheckOptions& options)
{
    Editor editor(schema, options.year);
    options.execute(editor, Command::have_person("p1", "Alice", 23));
    options.execute(editor, Command::have_person("p2", "Bob", 31));
    options.execute(editor, Command::have_dog("d1", "p1", "Rex", 4));
    options.execute(editor, Command::have_dog("d2", "p2", "Fifi", 2));
    return editor;
}

bool same_state(const Editor& a, const Editor& b)
{
    return model_equals(a.model(), b.model()) && a.store() == b.store();
}

class Checker {
public:
    explicit Checker(const CheckOptions& options)
        : options_(options)
        , schemas_(law_schemas())
    {
        report_.laws = {{"overwrite"}, {"idempotence"}, {"commutativity"}, {"roundtrip"}};
    }

    CheckReport run()
    {
        for (std::size_t i = 0; i < options_.cases; ++i) {
            const auto seed = case_seed(options_.seed, i);
            Rng rng(seed);
            for (const auto& s : schemas_)
                record(0, i, seed, [&] { return overwrite(rng, s); });
            for (const auto& s : schemas_)
                record(1, i, seed, [&] { return idempotence(rng, s); });
            const auto& s = schemas_[rng.below(schemas_.size())];
            record(2, i, seed, [&] { return commutativity(rng, s); });
            for (const auto& name : bundled_scenario_names())
                record(3, i, seed, [&] { return roundtrip(rng, bundled_scenario(name)); });
        }
        return std::move(report_);
    }

private:
    // Each law returns an empty string on success, otherwise a description.
    template <typename Fn>
    void record(std::size_t law, std::size_t index, std::uint64_t seed, Fn&& fn)
    {
        auto& tally = report_.laws[law];
        ++tally.checked;
        std::string failure;
        try {
            failure = fn();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        if (failure.empty())
            return;
        ++tally.failed;
        if (!report_.first_failure)
            report_.first_failure = CheckFailure{tally.law, index, seed, std::move(failure)};
    }

    Command same_target_command(Rng& rng, CommandKind kind, const std::string& id)
    {
        return random_command(rng, kind, id, {"p1", "p2"});
    }

    // Owners always exist in the seeded model, so no stub divergence.
    std::string overwrite(Rng& rng, const LawSchema& s)
    {
        const auto kind = rng.chance(50) ? CommandKind::HavePerson : CommandKind::HaveDog;
        const auto prefix = kind == CommandKind::HavePerson ? "p" : "d";
        const auto id = prefix + std::to_string(1 + rng.below(3));
        const auto c1 = same_target_command(rng, kind, id);
        const auto c2 = same_target_command(rng, kind, id);

        auto both = seeded_editor(s.schema, options_);
        auto only = both;
        options_.execute(both, c1);
        options_.execute(both, c2);
        options_.execute(only, c2);
        if (same_state(both, only))
            return {};
        return "schema " + s.label + ": " + describe(c1) + " then " + describe(c2) + " differs from the latter alone";
    }

    std::string idempotence(Rng& rng, const LawSchema& s)
    {
        const auto kind = rng.chance(50) ? CommandKind::HavePerson : CommandKind::HaveDog;
        const auto prefix = kind == CommandKind::HavePerson ? "p" : "d";
        const auto c = random_command(rng, kind, prefix + std::to_string(1 + rng.below(4)), {"p1", "p2", "p4"});

        auto twice = seeded_editor(s.schema, options_);
        auto once = twice;
        options_.execute(twice, c);
        options_.execute(twice, c);
        options_.execute(once, c);
        if (same_state(twice, once))
            return {};
        return "schema " + s.label + ": " + describe(c) + " twice differs from once";
    }

    std::string commutativity(Rng& rng, const LawSchema& s)
    {
        const std::size_t pool_size = std::max<std::size_t>(5, options_.max_commands);
        std::vector<std::pair<CommandKind, std::string>> pool;
        std::vector<std::string> persons;
        for (std::size_t i = 1; i <= pool_size; ++i) {
            persons.push_back("p" + std::to_string(i));
            pool.emplace_back(CommandKind::HavePerson, persons.back());
            pool.emplace_back(CommandKind::HaveDog, "d" + std::to_string(i));
        }
        rng.shuffle(pool);
        const auto size = 1 + rng.below(options_.max_commands);
        std::vector<Command> commands;
        for (std::size_t i = 0; i < size; ++i)
            commands.push_back(random_command(rng, pool[i].first, pool[i].second, persons));

        std::vector<std::size_t> order(size);
        std::iota(order.begin(), order.end(), 0);
        const auto start = seeded_editor(s.schema, options_);
        auto apply = [&](const std::vector<std::size_t>& perm) {
            auto editor = start;
            for (const auto idx : perm)
                options_.execute(editor, commands[idx]);
            return editor;
        };
        const auto baseline = apply(order);
        auto mismatch = [&](const std::vector<std::size_t>& perm) {
            std::string out = "schema " + s.label + ": order";
            for (const auto idx : perm)
                out += " " + std::to_string(idx);
            out += " differs from identity order over";
            for (const auto& c : commands)
                out += " " + describe(c);
            return out;
        };

        if (size <= 5) {
            while (std::next_permutation(order.begin(), order.end())) {
                if (!same_state(apply(order), baseline))
                    return mismatch(order);
            }
        } else {
            for (int k = 0; k < 24; ++k) {
                rng.shuffle(order);
                if (!same_state(apply(order), baseline))
                    return mismatch(order);
            }
        }
        return {};
    }

    std::string roundtrip(Rng& rng, const Scenario& scenario)
    {
        const auto input = random_m1_model(rng, scenario.m1_schema);
        MigrationSession session(scenario, options_.year);
        session.migrate_forward(input);
        const auto& back = session.migrate_backward();
        if (model_equals(back, input))
            return {};
        return "scenario " + scenario.name + ": backward model differs from input";
    }

    const CheckOptions& options_;
    std::vector<LawSchema> schemas_;
    CheckReport report_;
};

} // namespace

Command random_command(Rng& rng, CommandKind kind, std::string id, const std::vector<std::string>& owner_pool)
{
    if (kind == CommandKind::HavePerson)
        return Command::have_person(std::move(id), random_name(rng), random_age(rng));
    std::optional<std::string> owner;
    if (!owner_pool.empty() && rng.chance(75))
        owner = owner_pool[rng.below(owner_pool.size())];
    auto name = random_name(rng);
    auto age = random_age(rng);
    return Command::have_dog(std::move(id), std::move(owner), std::move(name), age);
}

InstanceModel random_m1_model(Rng& rng, SchemaPtr m1_schema)
{
    static const std::array<std::string_view, 16> keys{
        "person1", "person2", "person3", "dog1", "dog2", "dog3", "alice", "bob",
        "rex",     "x1",      "x2",      "x3",   "obj_a", "person9", "dog7", "n0"};
    std::vector<std::string_view> pool(keys.begin(), keys.end());
    rng.shuffle(pool);

    const auto persons = rng.below(5);
    const auto dogs = rng.below(5);
    std::vector<char> is_person(persons + dogs, 0);
    std::fill_n(is_person.begin(), persons, 1);
    rng.shuffle(is_person);

    InstanceModel model(std::move(m1_schema));
    std::vector<std::string> person_ids;
    std::vector<std::string> dog_ids;
    for (std::size_t i = 0; i < is_person.size(); ++i) {
        auto& obj = model.create(std::string(pool[i]), is_person[i] ? "Person" : "Dog");
        if (auto name = random_name(rng))
            obj.set_attribute("name", *name);
        if (auto age = random_age(rng))
            obj.set_attribute("age", *age);
        (is_person[i] ? person_ids : dog_ids).push_back(obj.id());
    }
    for (const auto& id : dog_ids) {
        if (!person_ids.empty() && rng.chance(75))
            model.at(id).set_reference("owner", person_ids[rng.below(person_ids.size())]);
    }
    return model;
}

CheckReport run_checks(const CheckOptions& options)
{
    if (options.max_commands == 0)
        throw Error("max_commands must be at least 1");
    return Checker(options).run();
}

std::string format_report(const CheckReport& report, const CheckOptions& options)
{
    std::ostringstream out;
    out << "check seed=" << options.seed << " cases=" << options.cases << " max_commands=" << options.max_commands
        << " year=" << options.year.value() << "\n";
    for (const auto& law : report.laws) {
        out << "law " << law.law << " checked=" << law.checked << " passed=" << (law.checked - law.failed)
            << " failed=" << law.failed << "\n";
    }
    if (report.first_failure) {
        const auto& f = *report.first_failure;
        out << "first_failure law=" << f.law << " case=" << f.case_index << " case_seed=" << f.case_seed << "\n";
        out << "  " << f.detail << "\n";
        out << "replay: evmigrate check --cases 1 --seed " << f.case_seed << " --max-commands " << options.max_commands
            << " --year " << options.year.value() << "\n";
    }
    out << "result " << (report.passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

} // namespace evmigrate
