#include "evmigrate/check.hpp"
#include "evmigrate/commands.hpp"
#include "evmigrate/editor.hpp"
#include "evmigrate/error.hpp"
#include "evmigrate/sync.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace evmigrate;

namespace {

SchemaPtr m1_schema() { return bundled_scenario("identity").m1_schema; }
SchemaPtr ybirth_schema() { return bundled_scenario("ybirth").m2_schema; }
SchemaPtr dog_no_age_schema() { return bundled_scenario("dog-no-age").m2_schema; }

Editor seeded(const SchemaPtr& schema)
{
    Editor editor(schema);
    editor.execute(Command::have_person("p1", "Alice", 23));
    editor.execute(Command::have_person("p2", "Bob", 31));
    editor.execute(Command::have_dog("d1", "p1", "Rex", 4));
    return editor;
}

} // namespace

TEST_CASE("run_have_person converts age to ybirth")
{
    Editor editor(ybirth_schema(), ReferenceYear(2020));
    CHECK(run_have_person(Command::have_person("p1", "Alice", 23), editor) == "p1");
    const auto& p1 = editor.model().at("p1");
    CHECK(p1.class_name() == "Person");
    CHECK(p1.get_string("name") == "Alice");
    CHECK(p1.get_int("ybirth") == 1997);
    // run alone does not touch the store
    CHECK(editor.store().empty());
}

TEST_CASE("run_have_person on the age schema")
{
    Editor editor(m1_schema());
    run_have_person(Command::have_person("p1", "Alice", 23), editor);
    CHECK(editor.model().at("p1").get_int("age") == 23);
}

TEST_CASE("absent age leaves ybirth UNSET")
{
    Editor editor(ybirth_schema());
    run_have_person(Command::have_person("p1", "Alice"), editor);
    const auto& p1 = editor.model().at("p1");
    CHECK(p1.get_string("name") == "Alice");
    CHECK_FALSE(p1.get_int("ybirth").has_value());
}

TEST_CASE("absent fields clear what an earlier command wrote")
{
    Editor editor(m1_schema());
    editor.execute(Command::have_person("p1", "Alice", 23));
    editor.execute(Command::have_dog("d1", "p1", "Rex", 4));
    editor.execute(Command::have_person("p1"));
    editor.execute(Command::have_dog("d1"));
    CHECK(editor.model().at("p1").attributes().empty());
    CHECK(editor.model().at("d1").references().empty());
    CHECK(editor.model().size() == 2);
}

TEST_CASE("run_have_dog creates an owner stub on the fly")
{
    Editor editor(m1_schema());
    run_have_dog(Command::have_dog("d1", "p1", "Rex", 4), editor);
    REQUIRE(editor.model().size() == 2);
    const auto& stub = editor.model().at("p1");
    CHECK(stub.class_name() == "Person");
    CHECK(stub.attributes().empty());
    const auto& dog = editor.model().at("d1");
    CHECK(dog.reference_targets("owner")[0] == "p1");
    CHECK(dog.get_int("age") == 4);

    const auto once = editor.model();
    run_have_dog(Command::have_dog("d1", "p1", "Rex", 4), editor);
    CHECK(model_equals(once, editor.model()));
}

TEST_CASE("run_have_dog skips age on a schema without it")
{
    Editor editor(dog_no_age_schema());
    run_have_dog(Command::have_dog("d1", std::nullopt, "Rex", 4), editor);
    const auto& dog = editor.model().at("d1");
    CHECK(dog.get_string("name") == "Rex");
    CHECK(dog.attributes().size() == 1);
}

TEST_CASE("a later ownerId re-homes the dog and the old owner stays")
{
    auto editor = seeded(m1_schema());
    editor.execute(Command::have_dog("d1", "p2", "Rex", 4));
    CHECK(editor.model().at("d1").reference_targets("owner")[0] == "p2");
    CHECK(editor.model().contains("p1"));
}

TEST_CASE("run rejects schemas without the target class")
{
    const auto persons_only = load_schema_ptr("class Person\n  attr name string\n");
    Editor editor(persons_only);
    CHECK_THROWS_AS(run_have_dog(Command::have_dog("d1", std::nullopt, "Rex"), editor), Error);
    const auto dogs_only = load_schema_ptr("class Dog\n  attr name string\n");
    Editor dogs(dogs_only);
    CHECK_THROWS_AS(run_have_person(Command::have_person("p1", "A"), dogs), Error);
    CHECK_THROWS_AS(run_have_person(Command::have_dog("d1"), dogs), Error);
}

TEST_CASE("command validation and equality")
{
    const auto a = Command::have_person("p1", "Alice", 23);
    CHECK(command_equals(a, a));
    CHECK_FALSE(command_equals(a, Command::have_person("p1", "Alice", 24)));
    CHECK_FALSE(command_equals(Command::have_person("p1"), Command::have_dog("p1")));
    CHECK_FALSE(command_equals(Command::have_dog("d1", "p1"), Command::have_dog("d1")));

    CHECK_THROWS_AS(Command::have_person("").validate(), Error);
    CHECK_THROWS_AS(Command::have_person("p 1").validate(), Error);
    auto bad = Command::have_person("p1");
    bad.owner_id = "p2";
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_NOTHROW(Command::have_dog("d1").validate());
}

TEST_CASE("reference year")
{
    CHECK(ReferenceYear().value() == 2020);
    CHECK_THROWS_AS(ReferenceYear(0), Error);
    CHECK_THROWS_AS(ReferenceYear(-5), Error);
    for (const int year : {2000, 2020, 2024}) {
        const ReferenceYear y(year);
        for (std::int64_t age = 0; age <= 150; ++age) {
            CHECK(y.ybirth_from_age(age) == year - age);
            CHECK(y.age_from_ybirth(y.ybirth_from_age(age)) == age);
        }
    }
}

TEST_CASE("property: overwrite law on owner-complete models")
{
    Rng rng(11);
    for (const auto& schema : {m1_schema(), ybirth_schema(), dog_no_age_schema()}) {
        for (int i = 0; i < 1000; ++i) {
            const bool person = rng.chance(50);
            const auto kind = person ? CommandKind::HavePerson : CommandKind::HaveDog;
            const auto id = (person ? "p" : "d") + std::to_string(1 + rng.below(3));
            const auto c1 = random_command(rng, kind, id, {"p1", "p2"});
            const auto c2 = random_command(rng, kind, id, {"p1", "p2"});

            auto both = seeded(schema);
            auto only = both;
            both.execute(c1);
            both.execute(c2);
            only.execute(c2);
            INFO(describe(c1), " / ", describe(c2));
            REQUIRE(model_equals(both.model(), only.model()));
            REQUIRE(both.store() == only.store());
        }
    }
}

TEST_CASE("overwrite law boundary: a stub from an earlier owner survives")
{
    auto both = seeded(m1_schema());
    auto only = both;
    both.execute(Command::have_dog("d1", "p9", "Rex", 4));
    both.execute(Command::have_dog("d1", "p2", "Rex", 4));
    only.execute(Command::have_dog("d1", "p2", "Rex", 4));
    CHECK_FALSE(model_equals(both.model(), only.model()));
    CHECK(both.model().size() == only.model().size() + 1);
    CHECK(both.model().at("p9").attributes().empty());
    CHECK(both.store() == only.store());
}

TEST_CASE("property: commutativity over every permutation")
{
    Rng rng(5);
    std::vector<std::string> persons{"p1", "p2", "p3", "p4"};
    for (int set = 0; set < 150; ++set) {
        std::vector<std::pair<CommandKind, std::string>> pool{
            {CommandKind::HavePerson, "p1"}, {CommandKind::HavePerson, "p2"}, {CommandKind::HavePerson, "p3"},
            {CommandKind::HavePerson, "p4"}, {CommandKind::HaveDog, "d1"},    {CommandKind::HaveDog, "d2"},
            {CommandKind::HaveDog, "d3"},    {CommandKind::HaveDog, "d4"}};
        rng.shuffle(pool);
        const auto size = 1 + rng.below(5);
        std::vector<Command> cmds;
        for (std::size_t i = 0; i < size; ++i)
            cmds.push_back(random_command(rng, pool[i].first, pool[i].second, persons));

        const auto schema = rng.chance(50) ? m1_schema() : ybirth_schema();
        std::vector<std::size_t> order(size);
        std::iota(order.begin(), order.end(), 0);
        std::optional<Editor> first;
        do {
            Editor editor(schema);
            for (const auto i : order)
                editor.execute(cmds[i]);
            if (!first) {
                first = editor;
                continue;
            }
            REQUIRE(model_equals(first->model(), editor.model()));
            REQUIRE(first->store() == editor.store());
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("HaveDog before HavePerson for its owner")
{
    const auto dog = Command::have_dog("d1", "p1", "Rex", 4);
    const auto person = Command::have_person("p1", "Alice", 23);
    Editor a(m1_schema());
    a.execute(dog);
    a.execute(person);
    Editor b(m1_schema());
    b.execute(person);
    b.execute(dog);
    CHECK(model_equals(a.model(), b.model()));
    CHECK(a.model().at("p1").get_string("name") == "Alice");
}

TEST_CASE("property: idempotence")
{
    Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        const auto kind = rng.chance(50) ? CommandKind::HavePerson : CommandKind::HaveDog;
        const auto c = random_command(rng, kind, kind == CommandKind::HavePerson ? "p5" : "d5", {"p1", "p6"});
        auto twice = seeded(dog_no_age_schema());
        auto once = twice;
        twice.execute(c);
        twice.execute(c);
        once.execute(c);
        REQUIRE(model_equals(twice.model(), once.model()));
        REQUIRE(twice.store() == once.store());
    }
}
