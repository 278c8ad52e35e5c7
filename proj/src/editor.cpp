#include "evmigrate/editor.hpp"

#include "evmigrate/error.hpp"

#include <algorithm>
#include <cctype>

namespace evmigrate {

void EventStore::put(Command cmd)
{
    const auto it = entries_.find(cmd.id);
    if (it != entries_.end()) {
        it->second = std::move(cmd);
    } else {
        auto key = cmd.id;
        entries_.emplace(std::move(key), std::move(cmd));
    }
}

const Command* EventStore::find(std::string_view id) const
{
    const auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Command> EventStore::commands() const
{
    std::vector<Command> out;
    out.reserve(entries_.size());
    for (const auto& [id, cmd] : entries_)
        out.push_back(cmd);
    std::ranges::sort(out, canonical_less);
    return out;
}

// ---------------------------------------------------------------------------

Editor::Editor(SchemaPtr schema, ReferenceYear year)
    : schema_(std::move(schema))
    , year_(year)
    , model_(schema_)
{
}

void Editor::adopt(InstanceModel model)
{
    if (!model.schema().same_structure(*schema_))
        throw Error("model does not conform to the editor schema '" + schema_->name() + "'");
    model.validate();

    for (auto& [class_name, reg] : registry_) {
        for (auto it = reg.object_to_id.begin(); it != reg.object_to_id.end();) {
            const auto* obj = model.find(it->first);
            if (obj != nullptr && obj->class_name() == class_name) {
                ++it;
                continue;
            }
            reg.id_to_object.erase(it->second);
            id_class_.erase(it->second);
            it = reg.object_to_id.erase(it);
        }
    }
    model_ = std::move(model);
}

void Editor::register_pair(const std::string& class_name, const std::string& id, const std::string& object_id)
{
    auto& reg = registry_[class_name];
    reg.id_to_object.emplace(id, object_id);
    reg.object_to_id.emplace(object_id, id);
    id_class_.emplace(id, class_name);
}

DynamicObject& Editor::get_or_create(std::string_view class_name, std::string_view id)
{
    const auto& cls = schema_->get_class(class_name);
    if (id.empty())
        throw Error("getOrCreate with empty id");

    if (const auto owner = id_class_.find(id); owner != id_class_.end()) {
        if (owner->second != cls.name)
            throw Error("id '" + std::string(id) + "' already belongs to class " + owner->second);
        const auto& reg = registry_.find(cls.name)->second;
        return model_.at(reg.id_to_object.find(id)->second);
    }

    auto& obj = model_.create(model_.unique_id(id), cls.name);
    register_pair(cls.name, std::string(id), obj.id());
    return obj;
}

std::string Editor::execute(const Command& cmd)
{
    cmd.validate();
    auto id = run(cmd, *this);
    store_.put(cmd);
    return id;
}

void Editor::merge_all(std::span<const Command> incoming)
{
    std::vector<Command> ordered(incoming.begin(), incoming.end());
    std::ranges::stable_sort(ordered, canonical_less);
    for (const auto& cmd : ordered) {
        try {
            execute(cmd);
        } catch (const Error& e) {
            throw Error("merge failed at " + describe(cmd) + ": " + e.what());
        }
    }
}

std::optional<std::string> Editor::registered_id(const DynamicObject& obj) const
{
    const auto reg = registry_.find(obj.class_name());
    if (reg == registry_.end())
        return std::nullopt;
    const auto it = reg->second.object_to_id.find(obj.id());
    if (it == reg->second.object_to_id.end())
        return std::nullopt;
    return it->second;
}

std::string Editor::id_for(const DynamicObject& obj)
{
    const auto* own = model_.find(obj.id());
    if (own == nullptr || own->class_name() != obj.class_name())
        throw Error("object '" + obj.id() + "' is not part of the editor model");
    if (auto id = registered_id(obj))
        return *id;

    std::string prefix = obj.class_name();
    std::ranges::transform(prefix, prefix.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto& reg = registry_[obj.class_name()];
    std::string fresh;
    do {
        fresh = prefix + std::to_string(++reg.counter);
    } while (id_class_.contains(fresh));
    register_pair(obj.class_name(), fresh, obj.id());
    return fresh;
}

std::optional<std::int64_t> Editor::read_age(const DynamicObject& obj) const
{
    const auto& cls = obj.meta_class();
    if (cls.find_attribute("age")) {
        if (auto age = obj.get_int("age"))
            return age;
    }
    if (cls.find_attribute("ybirth")) {
        if (auto ybirth = obj.get_int("ybirth"))
            return year_.age_from_ybirth(*ybirth);
    }
    return std::nullopt;
}

namespace {

// Fields the schema cannot represent are carried over from the command
// previously stored for the same id.
void recover_unrepresented(Command& cmd, const MetaClass& cls, const EventStore& store)
{
    const auto* old = store.find(cmd.id);
    if (old == nullptr || old->kind != cmd.kind)
        return;
    if (!cls.find_attribute("name"))
        cmd.name = old->name;
    if (!cls.find_attribute("age") && !cls.find_attribute("ybirth"))
        cmd.age = old->age;
    if (cmd.kind == CommandKind::HaveDog && !cls.find_reference("owner"))
        cmd.owner_id = old->owner_id;
}

std::optional<std::string> read_name(const DynamicObject& obj)
{
    if (!obj.meta_class().find_attribute("name"))
        return std::nullopt;
    return obj.get_string("name");
}

} // namespace

Command Editor::parse_person(const DynamicObject& obj)
{
    if (obj.class_name() != "Person")
        throw Error("parse_person on object '" + obj.id() + "' of class " + obj.class_name());
    auto cmd = Command::have_person(id_for(obj), read_name(obj), read_age(obj));
    recover_unrepresented(cmd, obj.meta_class(), store_);
    return cmd;
}

Command Editor::parse_dog(const DynamicObject& obj)
{
    if (obj.class_name() != "Dog")
        throw Error("parse_dog on object '" + obj.id() + "' of class " + obj.class_name());
    std::optional<std::string> owner_id;
    if (obj.meta_class().find_reference("owner")) {
        const auto targets = obj.reference_targets("owner");
        if (!targets.empty())
            owner_id = id_for(model_.at(targets.front()));
    }
    auto cmd = Command::have_dog(id_for(obj), std::move(owner_id), read_name(obj), read_age(obj));
    recover_unrepresented(cmd, obj.meta_class(), store_);
    return cmd;
}

std::vector<Command> Editor::parse_model()
{
    model_.validate();
    std::vector<std::string> persons;
    std::vector<std::string> dogs;
    for (const auto& id : model_.ids()) {
        const auto& cls = model_.at(id).class_name();
        if (cls == "Person")
            persons.push_back(id);
        else if (cls == "Dog")
            dogs.push_back(id);
        else
            throw Error("cannot parse object '" + id + "' of class " + cls + ": no command covers it");
    }
    for (const auto& id : persons)
        execute(parse_person(model_.at(id)));
    for (const auto& id : dogs)
        execute(parse_dog(model_.at(id)));
    return store_.commands();
}

} // namespace evmigrate
