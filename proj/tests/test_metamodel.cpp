#include "evmigrate/check.hpp"
#include "evmigrate/error.hpp"
#include "evmigrate/metamodel.hpp"
#include "evmigrate/sync.hpp"

#include <doctest.h>

using namespace evmigrate;

namespace {

constexpr std::string_view person_dog = R"(# owners and their dogs
class Person
  attr name string
  attr age int
  ref dogs -> Dog many
class Dog
  attr name string
  attr age int
  ref owner -> Person one
)";

int error_line(std::string_view source)
{
    try {
        load_schema(source);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("load_schema builds classes, attributes and references")
{
    const auto schema = load_schema("class Person\n  attr name string\n  attr age int\n");
    REQUIRE(schema.classes().size() == 1);
    const auto& person = schema.get_class("Person");
    REQUIRE(person.attributes.size() == 2);
    CHECK(person.attributes[0] == AttributeDecl{"name", AttrKind::String});
    CHECK(person.attributes[1] == AttributeDecl{"age", AttrKind::Integer});

    const auto full = load_schema(person_dog);
    const auto* owner = full.get_class("Dog").find_reference("owner");
    REQUIRE(owner != nullptr);
    CHECK(owner->target == "Person");
    CHECK(owner->multiplicity == Multiplicity::One);
    CHECK(full.find_class(owner->target) != nullptr);
    CHECK(full.get_class("Person").find_reference("dogs")->multiplicity == Multiplicity::Many);
}

TEST_CASE("load_schema reports errors with line numbers")
{
    CHECK(error_line("class Dog\n  attr name string\n  ref owner -> Cat one\n") == 3);
    CHECK(error_line("class A\nclass A\n") == 2);
    CHECK(error_line("class A\n  attr x int\n  attr x string\n") == 3);
    CHECK(error_line("class A\n  attr x int\n  ref x -> A one\n") == 3);
    CHECK(error_line("class A\n  attr x float\n") == 2);
    CHECK(error_line("  attr x int\n") == 1);
    CHECK(error_line("class A\n   attr x int\n") == 2);
    CHECK(error_line("class A\n\tattr x int\n") == 2);
    CHECK(error_line("class A\n  ref b -> A several\n") == 2);
    CHECK(error_line("class A extra\n") == 1);
    CHECK(error_line("class A\n  field x int\n") == 2);
    CHECK_THROWS_AS(MetaModel("m", {MetaClass{"A", {}, {{"r", "B", Multiplicity::One}}}}), Error);
}

TEST_CASE("has_attribute queries the schema at runtime")
{
    const auto ybirth = bundled_scenario("ybirth").m2_schema;
    const auto m1 = bundled_scenario("ybirth").m1_schema;
    CHECK(has_attribute(*ybirth, "Person", "ybirth"));
    CHECK_FALSE(has_attribute(*m1, "Person", "ybirth"));
    for (const auto& name : bundled_scenario_names()) {
        CHECK(has_attribute(*bundled_scenario(name).m1_schema, "Person", "name"));
        CHECK(has_attribute(*bundled_scenario(name).m2_schema, "Person", "name"));
    }
    CHECK_THROWS_AS(has_attribute(*m1, "Cat", "name"), Error);
}

TEST_CASE("attributes: set, overwrite, UNSET and schema checks")
{
    const auto schema = load_schema_ptr(person_dog);
    DynamicObject person(schema, "p1", "Person");

    CHECK_FALSE(person.get_attribute("name").has_value());
    person.set_attribute("name", std::string("Alice"));
    CHECK(person.get_string("name") == "Alice");

    person.set_attribute("age", std::int64_t{5});
    person.set_attribute("age", std::int64_t{7});
    CHECK(person.get_int("age") == 7);

    person.set_attribute("name", std::string());
    REQUIRE(person.get_attribute("name").has_value());
    CHECK(person.get_string("name") == "");
    person.clear_attribute("name");
    CHECK_FALSE(person.get_attribute("name").has_value());

    CHECK_THROWS_AS(person.set_attribute("ybirth", std::int64_t{1997}), Error);
    CHECK_THROWS_AS(person.get_attribute("ybirth"), Error);
    CHECK_THROWS_AS(person.set_attribute("age", std::string("old")), Error);
    CHECK_THROWS_AS(person.set_attribute("name", std::int64_t{3}), Error);
}

TEST_CASE("references: one replaces, many has set semantics")
{
    const auto schema = load_schema_ptr(person_dog);
    DynamicObject dog(schema, "d1", "Dog");
    dog.set_reference("owner", "p1");
    dog.set_reference("owner", "p2");
    REQUIRE(dog.reference_targets("owner").size() == 1);
    CHECK(dog.reference_targets("owner")[0] == "p2");

    DynamicObject person(schema, "p1", "Person");
    person.set_reference("dogs", "d1");
    person.set_reference("dogs", "d1");
    person.set_reference("dogs", "d2");
    const auto dogs = person.reference_targets("dogs");
    REQUIRE(dogs.size() == 2);
    CHECK(dogs[0] == "d1");
    CHECK(dogs[1] == "d2");

    CHECK_THROWS_AS(dog.set_reference("walker", "p1"), Error);
    CHECK_THROWS_AS(dog.reference_targets("walker"), Error);
}

TEST_CASE("instance model validation")
{
    const auto schema = load_schema_ptr(person_dog);
    InstanceModel model(schema);
    model.create("p1", "Person");
    auto& dog = model.create("d1", "Dog");
    CHECK_THROWS_AS(model.create("p1", "Dog"), Error);
    CHECK_THROWS_AS(model.create("c1", "Cat"), Error);

    dog.set_reference("owner", "p1");
    CHECK_NOTHROW(model.validate());
    dog.set_reference("owner", "nobody");
    CHECK_THROWS_AS(model.validate(), Error);
    dog.set_reference("owner", "d1");
    CHECK_THROWS_AS(model.validate(), Error);

    CHECK(model.unique_id("p9") == "p9");
    CHECK(model.unique_id("p1") == "p1_1");
}

TEST_CASE("model_equals examples")
{
    const auto schema = load_schema_ptr(person_dog);
    InstanceModel a(schema);
    auto& pa = a.create("p1", "Person");
    pa.set_attribute("age", std::int64_t{23});
    a.create("d1", "Dog").set_reference("owner", "p1");
    CHECK(model_equals(a, a));

    InstanceModel b(schema);
    b.create("d1", "Dog").set_reference("owner", "p1");
    b.create("p1", "Person").set_attribute("age", std::int64_t{23});
    CHECK(model_equals(a, b));

    b.at("p1").set_attribute("age", std::int64_t{24});
    CHECK_FALSE(model_equals(a, b));

    // UNSET is not the default value.
    InstanceModel c(schema);
    c.create("p1", "Person");
    InstanceModel d(schema);
    d.create("p1", "Person").set_attribute("age", std::int64_t{0});
    CHECK_FALSE(model_equals(c, d));

    // many-references compare as sets
    InstanceModel e(schema);
    e.create("d1", "Dog");
    e.create("d2", "Dog");
    auto& pe = e.create("p1", "Person");
    pe.set_reference("dogs", "d1");
    pe.set_reference("dogs", "d2");
    InstanceModel f(schema);
    f.create("d1", "Dog");
    f.create("d2", "Dog");
    auto& pf = f.create("p1", "Person");
    pf.set_reference("dogs", "d2");
    pf.set_reference("dogs", "d1");
    CHECK(model_equals(e, f));
}

TEST_CASE("property: model_equals is an equivalence relation")
{
    const auto m1 = bundled_scenario("identity").m1_schema;
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        const auto a = random_m1_model(rng, m1);
        const auto b = rng.chance(50) ? a : random_m1_model(rng, m1);
        const auto c = rng.chance(50) ? b : random_m1_model(rng, m1);
        CHECK(model_equals(a, a));
        CHECK(model_equals(a, b) == model_equals(b, a));
        if (model_equals(a, b) && model_equals(b, c))
            CHECK(model_equals(a, c));
    }
}

TEST_CASE("property: set/get round trip and undeclared features are rejected")
{
    const auto schema = load_schema_ptr(person_dog);
    Rng rng(99);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
    for (int i = 0; i < 500; ++i) {
        DynamicObject obj(schema, "o1", rng.chance(50) ? "Person" : "Dog");
        const auto value = rng.between(-1000, 1000);
        obj.set_attribute("age", value);
        CHECK(obj.get_int("age") == value);
        const std::string name(1 + rng.below(6), alphabet[rng.below(alphabet.size())]);
        obj.set_attribute("name", name);
        CHECK(obj.get_string("name") == name);

        std::string feature;
        for (std::size_t n = 1 + rng.below(8); n > 0; --n)
            feature += alphabet[rng.below(alphabet.size())];
        if (obj.meta_class().find_attribute(feature) || obj.meta_class().find_reference(feature))
            continue;
        CHECK_THROWS_AS(obj.set_attribute(feature, value), Error);
        CHECK_THROWS_AS(obj.set_attribute(feature, name), Error);
        CHECK_THROWS_AS(obj.set_reference(feature, "x"), Error);
        CHECK_THROWS_AS(obj.clear_attribute(feature), Error);
    }
}
