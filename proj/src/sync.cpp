#include "evmigrate/sync.hpp"

#include "evmigrate/codec.hpp"
#include "evmigrate/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <array>

namespace evmigrate {

namespace {

constexpr std::string_view m1_schema_text = R"(class Person
  attr name string
  attr age int
class Dog
  attr name string
  attr age int
  ref owner -> Person one
)";

constexpr std::string_view ybirth_schema_text = R"(class Person
  attr name string
  attr ybirth int
class Dog
  attr name string
  attr age int
  ref owner -> Person one
)";

constexpr std::string_view dog_no_age_schema_text = R"(class Person
  attr name string
  attr age int
class Dog
  attr name string
  ref owner -> Person one
)";

struct BundledEntry {
    std::string_view name;
    std::string_view m2_text;
    std::string_view notes;
};

constexpr std::array bundled_entries{
    BundledEntry{"identity", m1_schema_text, "M2 schema equals M1"},
    BundledEntry{"ybirth", ybirth_schema_text, "M2 Person stores year of birth instead of age"},
    BundledEntry{"dog-no-age", dog_no_age_schema_text, "M2 Dog has no age attribute"},
};

const std::vector<Scenario>& scenarios()
{
    static const std::vector<Scenario> all = [] {
        std::vector<Scenario> out;
        const auto m1 = load_schema_ptr(m1_schema_text, "m1");
        for (const auto& entry : bundled_entries) {
            out.push_back(Scenario{std::string(entry.name), m1,
                                   load_schema_ptr(entry.m2_text, "m2-" + std::string(entry.name)),
                                   std::string(entry.notes)});
        }
        return out;
    }();
    return all;
}

} // namespace

std::vector<std::string> bundled_scenario_names()
{
    std::vector<std::string> names;
    for (const auto& entry : bundled_entries)
        names.emplace_back(entry.name);
    return names;
}

const Scenario& bundled_scenario(std::string_view name)
{
    const auto& all = scenarios();
    const auto it = std::ranges::find(all, name, &Scenario::name);
    if (it == all.end())
        throw Error("unknown scenario '" + std::string(name) + "'");
    return *it;
}

std::string_view bundled_m1_schema_text()
{
    return m1_schema_text;
}

std::string_view bundled_m2_schema_text(std::string_view scenario)
{
    const auto it = std::ranges::find(bundled_entries, scenario, &BundledEntry::name);
    if (it == bundled_entries.end())
        throw Error("unknown scenario '" + std::string(scenario) + "'");
    return it->m2_text;
}

std::string transfer(const Editor& from, Editor& to)
{
    auto wire = encode_log(from.store(), from.reference_year().value());
    const auto doc = decode_log(wire);
    if (doc.reference_year != to.reference_year().value()) {
        throw Error("reference year mismatch: log has " + std::to_string(doc.reference_year) + ", receiver uses " +
                    std::to_string(to.reference_year().value()));
    }
    to.merge_all(doc.commands);
    return wire;
}

// ---------------------------------------------------------------------------

MigrationSession::MigrationSession(SchemaPtr m1_schema, SchemaPtr m2_schema, ReferenceYear year)
    : year_(year)
    , m1_(std::move(m1_schema), year)
    , m2_(std::move(m2_schema), year)
{
}

MigrationSession::MigrationSession(const Scenario& scenario, ReferenceYear year)
    : MigrationSession(scenario.m1_schema, scenario.m2_schema, year)
{
}

const InstanceModel& MigrationSession::migrate_forward(InstanceModel input)
{
    m1_.adopt(std::move(input));
    m1_.parse_model();
    last_transfer_ = transfer(m1_, m2_);
    return m2_.model();
}

const InstanceModel& MigrationSession::migrate_backward()
{
    m2_.parse_model();
    last_transfer_ = transfer(m2_, m1_);
    return m1_.model();
}

// ---------------------------------------------------------------------------

std::vector<Mutation> parse_mutations(std::string_view script)
{
    std::vector<Mutation> out;
    for (const auto& line : text::significant_lines(script)) {
        const auto [op, rest] = text::head_and_rest(line.body);
        const auto [first, rest2] = text::head_and_rest(rest);
        const auto [second, rest3] = text::head_and_rest(rest2);
        Mutation m;
        m.line = line.number;
        if (op == "set") {
            if (first.empty() || second.empty())
                throw ParseError(line.number, "expected 'set <id> <attr> <value>'");
            m.op = Mutation::Op::Set;
            m.id = first;
            m.feature = second;
            m.value = rest3;
        } else if (op == "new") {
            if (first.empty() || second.empty() || !rest3.empty())
                throw ParseError(line.number, "expected 'new <Class> <id>'");
            m.op = Mutation::Op::New;
            m.feature = first;
            m.id = second;
        } else if (op == "link") {
            if (first.empty() || second.empty() || text::tokens(rest3).size() != 1)
                throw ParseError(line.number, "expected 'link <id> <ref> <targetId>'");
            m.op = Mutation::Op::Link;
            m.id = first;
            m.feature = second;
            m.value = rest3;
        } else {
            throw ParseError(line.number, "unknown mutation '" + std::string(op) + "'");
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

void apply_one(InstanceModel& model, const Mutation& m)
{
    switch (m.op) {
    case Mutation::Op::New:
        model.create(m.id, m.feature);
        return;
    case Mutation::Op::Set: {
        auto& obj = model.at(m.id);
        const auto* attr = obj.meta_class().find_attribute(m.feature);
        if (attr == nullptr)
            throw Error("class " + obj.class_name() + " has no attribute '" + m.feature + "'");
        if (attr->kind == AttrKind::Integer) {
            const auto value = text::parse_int(m.value);
            if (!value)
                throw Error("attribute " + obj.class_name() + "." + m.feature + " expects int, got '" + m.value + "'");
            obj.set_attribute(m.feature, *value);
        } else {
            obj.set_attribute(m.feature, m.value);
        }
        return;
    }
    case Mutation::Op::Link: {
        auto& obj = model.at(m.id);
        const auto* ref = obj.meta_class().find_reference(m.feature);
        if (ref == nullptr)
            throw Error("class " + obj.class_name() + " has no reference '" + m.feature + "'");
        const auto& target = model.at(m.value);
        if (target.class_name() != ref->target)
            throw Error("reference " + m.feature + " expects " + ref->target + ", '" + m.value + "' is a " +
                        target.class_name());
        obj.set_reference(m.feature, m.value);
        return;
    }
    }
}

} // namespace

void apply_mutations(InstanceModel& model, std::span<const Mutation> mutations)
{
    for (const auto& m : mutations) {
        try {
            apply_one(model, m);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            if (m.line > 0)
                throw ParseError(m.line, e.what());
            throw;
        }
    }
}

void apply_mutations(InstanceModel& model, std::string_view script)
{
    const auto mutations = parse_mutations(script);
    apply_mutations(model, mutations);
}

} // namespace evmigrate
