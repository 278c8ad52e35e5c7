#include "evmigrate/commands.hpp"

#include "evmigrate/editor.hpp"
#include "evmigrate/error.hpp"

#include <tuple>

namespace evmigrate {

std::string_view to_string(CommandKind kind)
{
    return kind == CommandKind::HavePerson ? "HavePerson" : "HaveDog";
}

std::optional<CommandKind> parse_command_kind(std::string_view text)
{
    if (text == "HavePerson")
        return CommandKind::HavePerson;
    if (text == "HaveDog")
        return CommandKind::HaveDog;
    return std::nullopt;
}

ReferenceYear::ReferenceYear(int year)
    : year_(year)
{
    if (year <= 0)
        throw Error("reference year must be positive, got " + std::to_string(year));
}

Command Command::have_person(std::string id, std::optional<std::string> name, std::optional<std::int64_t> age)
{
    return Command{CommandKind::HavePerson, std::move(id), std::move(name), age, std::nullopt};
}

Command Command::have_dog(std::string id, std::optional<std::string> owner_id, std::optional<std::string> name,
                          std::optional<std::int64_t> age)
{
    return Command{CommandKind::HaveDog, std::move(id), std::move(name), age, std::move(owner_id)};
}

std::string_view Command::target_class() const noexcept
{
    return kind == CommandKind::HavePerson ? "Person" : "Dog";
}

void Command::validate() const
{
    if (id.empty())
        throw Error(std::string(to_string(kind)) + " with empty id");
    if (kind == CommandKind::HavePerson && owner_id)
        throw Error("HavePerson " + id + " carries an ownerId");
    if (id.find_first_of(" \t\r\n") != std::string::npos)
        throw Error("command id '" + id + "' contains whitespace");
    if (owner_id && (owner_id->empty() || owner_id->find_first_of(" \t\r\n") != std::string::npos))
        throw Error("HaveDog " + id + " has a malformed ownerId");
}

bool canonical_less(const Command& a, const Command& b) noexcept
{
    return std::tie(a.kind, a.id) < std::tie(b.kind, b.id);
}

std::string describe(const Command& cmd)
{
    std::string out(to_string(cmd.kind));
    out += "(id=" + cmd.id;
    if (cmd.owner_id)
        out += ", ownerId=" + *cmd.owner_id;
    out += ", name=" + (cmd.name ? *cmd.name : std::string("<unset>"));
    out += ", age=" + (cmd.age ? std::to_string(*cmd.age) : std::string("<unset>"));
    out += ")";
    return out;
}

namespace {

// Writes name and age through whichever features the class declares.
void write_name_and_age(DynamicObject& obj, const Command& cmd, ReferenceYear year)
{
    const auto& cls = obj.meta_class();
    if (cls.find_attribute("name")) {
        if (cmd.name)
            obj.set_attribute("name", *cmd.name);
        else
            obj.clear_attribute("name");
    }
    if (cls.find_attribute("age")) {
        if (cmd.age)
            obj.set_attribute("age", *cmd.age);
        else
            obj.clear_attribute("age");
    }
    if (cls.find_attribute("ybirth")) {
        if (cmd.age)
            obj.set_attribute("ybirth", year.ybirth_from_age(*cmd.age));
        else
            obj.clear_attribute("ybirth");
    }
}

void expect_kind(const Command& cmd, CommandKind kind)
{
    if (cmd.kind != kind)
        throw Error("expected " + std::string(to_string(kind)) + ", got " + describe(cmd));
    cmd.validate();
}

} // namespace

std::string run_have_person(const Command& cmd, Editor& editor)
{
    expect_kind(cmd, CommandKind::HavePerson);
    auto& person = editor.get_or_create("Person", cmd.id);
    write_name_and_age(person, cmd, editor.reference_year());
    return cmd.id;
}

std::string run_have_dog(const Command& cmd, Editor& editor)
{
    expect_kind(cmd, CommandKind::HaveDog);
    auto& dog = editor.get_or_create("Dog", cmd.id);
    write_name_and_age(dog, cmd, editor.reference_year());

    const bool has_owner_ref = dog.meta_class().find_reference("owner") != nullptr;
    if (cmd.owner_id) {
        const auto& owner = editor.get_or_create("Person", *cmd.owner_id);
        if (has_owner_ref)
            dog.set_reference("owner", owner.id());
    } else if (has_owner_ref) {
        dog.clear_reference("owner");
    }
    return cmd.id;
}

std::string run(const Command& cmd, Editor& editor)
{
    return cmd.kind == CommandKind::HavePerson ? run_have_person(cmd, editor) : run_have_dog(cmd, editor);
}

} // namespace evmigrate
