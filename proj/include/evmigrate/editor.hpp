#pragma once

#include "evmigrate/commands.hpp"
#include "evmigrate/metamodel.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmigrate {

/// Executed commands keyed by target id. Behaves as a set: the only
/// enumeration offered is the canonical (kind, id) order.
class EventStore {
public:
    /// Inserts or replaces the entry for cmd.id.
    void put(Command cmd);

    const Command* find(std::string_view id) const;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::vector<Command> commands() const;

    friend bool operator==(const EventStore&, const EventStore&) = default;

private:
    std::map<std::string, Command, std::less<>> entries_;
};

/// Holds one schema's model, its event store and the object/id registry.
///
/// Command ids and model object ids are separate namespaces. Objects created
/// by a command get the command id as their model id when it is free; objects
/// that arrive through a loaded or externally edited model are assigned a
/// command id lazily by id_for().
class Editor {
public:
    explicit Editor(SchemaPtr schema, ReferenceYear year = {});

    const MetaModel& schema() const noexcept { return *schema_; }
    const SchemaPtr& schema_ptr() const noexcept { return schema_; }
    ReferenceYear reference_year() const noexcept { return year_; }

    const InstanceModel& model() const noexcept { return model_; }
    /// Direct model access, bypassing commands (external modification).
    InstanceModel& model() noexcept { return model_; }

    const EventStore& store() const noexcept { return store_; }

    /// Replaces the model with a loaded one. Registry entries survive only
    /// for objects that are still present with the same class; the store
    /// and the fresh-id counters are kept.
    void adopt(InstanceModel model);

    /// Returns the object registered under `id`, creating an all-UNSET one
    /// if there is none. Throws Error if `id` belongs to another class.
    DynamicObject& get_or_create(std::string_view class_name, std::string_view id);

    /// Runs the command, then records it in the store (insert or replace).
    std::string execute(const Command& cmd);

    /// Executes each command in canonical order. On failure the error names
    /// the offending command; commands before it remain applied.
    void merge_all(std::span<const Command> incoming);

    /// Registered command id of a model object, generating and registering
    /// `<lowercase class><n>` if it has none.
    std::string id_for(const DynamicObject& obj);

    /// Registered command id of a model object, if any.
    std::optional<std::string> registered_id(const DynamicObject& obj) const;

    /// Visits Persons then Dogs (model insertion order within each), executes
    /// the derived commands and returns the resulting store contents.
    std::vector<Command> parse_model();
    Command parse_person(const DynamicObject& obj);
    Command parse_dog(const DynamicObject& obj);

private:
    struct ClassRegistry {
        StringMap<std::string> id_to_object;
        StringMap<std::string> object_to_id;
        std::size_t counter = 0;
    };

    void register_pair(const std::string& class_name, const std::string& id, const std::string& object_id);
    std::optional<std::int64_t> read_age(const DynamicObject& obj) const;

    SchemaPtr schema_;
    ReferenceYear year_;
    InstanceModel model_;
    EventStore store_;
    std::map<std::string, ClassRegistry, std::less<>> registry_;
    StringMap<std::string> id_class_; // command id -> class, across all classes
};

} // namespace evmigrate
