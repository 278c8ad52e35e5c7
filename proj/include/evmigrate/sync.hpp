#pragma once

#include "evmigrate/commands.hpp"
#include "evmigrate/editor.hpp"
#include "evmigrate/metamodel.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmigrate {

/// A pair of schemas to migrate between.
struct Scenario {
    std::string name;
    SchemaPtr m1_schema;
    SchemaPtr m2_schema;
    std::string notes;
};

/// `identity`, `ybirth` and `dog-no-age`.
std::vector<std::string> bundled_scenario_names();
/// Throws Error for an unknown name.
const Scenario& bundled_scenario(std::string_view name);

/// Schema text of the bundled scenarios, as shipped under scenarios/.
std::string_view bundled_m1_schema_text();
std::string_view bundled_m2_schema_text(std::string_view scenario);

/// Sends `from`'s store to `to` through the encoded log and merges it.
/// Returns the bytes that went over the wire.
std::string transfer(const Editor& from, Editor& to);

/// Two editors over the same reference year, driven through the
/// forward / modify / backward procedure.
class MigrationSession {
public:
    MigrationSession(SchemaPtr m1_schema, SchemaPtr m2_schema, ReferenceYear year = {});
    explicit MigrationSession(const Scenario& scenario, ReferenceYear year = {});

    Editor& m1() noexcept { return m1_; }
    Editor& m2() noexcept { return m2_; }
    const Editor& m1() const noexcept { return m1_; }
    const Editor& m2() const noexcept { return m2_; }
    ReferenceYear reference_year() const noexcept { return year_; }

    /// M1 adopts `input`, parses it into its store, and the store is sent to
    /// and merged into M2. Returns M2's model.
    const InstanceModel& migrate_forward(InstanceModel input);

    /// M2 re-parses its (possibly modified) model into its store, which is
    /// then sent to and merged into M1. Returns M1's model.
    const InstanceModel& migrate_backward();

    /// Wire bytes of the most recent transfer.
    const std::string& last_transfer() const noexcept { return last_transfer_; }

private:
    ReferenceYear year_;
    Editor m1_;
    Editor m2_;
    std::string last_transfer_;
};

/// One line of a mutation script.
struct Mutation {
    enum class Op { Set, New, Link };
    Op op = Op::Set;
    std::string id;     // target object (set/link) or new object id
    std::string feature; // attribute or reference name; class name for New
    std::string value;  // attribute value text or link target id
    int line = 0;
};

/// `set <id> <attr> <value>`, `new <Class> <id>`, `link <id> <ref> <target>`.
std::vector<Mutation> parse_mutations(std::string_view script);

/// Edits the model directly. Errors name the script line when known.
void apply_mutations(InstanceModel& model, std::span<const Mutation> mutations);
void apply_mutations(InstanceModel& model, std::string_view script);

} // namespace evmigrate
