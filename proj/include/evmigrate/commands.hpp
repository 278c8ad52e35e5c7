#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace evmigrate {

class Editor;

enum class CommandKind { HavePerson, HaveDog };

std::string_view to_string(CommandKind kind);
std::optional<CommandKind> parse_command_kind(std::string_view text);

/// Calendar year used to convert between `age` and `ybirth`.
class ReferenceYear {
public:
    static constexpr int default_year = 2020;

    constexpr ReferenceYear() = default;
    /// Throws Error unless year > 0.
    explicit ReferenceYear(int year);

    constexpr int value() const noexcept { return year_; }

    std::int64_t ybirth_from_age(std::int64_t age) const noexcept { return year_ - age; }
    std::int64_t age_from_ybirth(std::int64_t ybirth) const noexcept { return year_ - ybirth; }

    friend bool operator==(ReferenceYear, ReferenceYear) = default;

private:
    int year_ = default_year;
};

/// One entry of the shared editing vocabulary. A command carries the full
/// state of its target: executing it writes every field, and an absent
/// field clears the corresponding attribute or reference.
struct Command {
    CommandKind kind = CommandKind::HavePerson;
    std::string id;
    std::optional<std::string> name;
    std::optional<std::int64_t> age;
    std::optional<std::string> owner_id; // HaveDog only

    static Command have_person(std::string id, std::optional<std::string> name = std::nullopt,
                               std::optional<std::int64_t> age = std::nullopt);
    static Command have_dog(std::string id, std::optional<std::string> owner_id = std::nullopt,
                            std::optional<std::string> name = std::nullopt,
                            std::optional<std::int64_t> age = std::nullopt);

    /// Class of the object the command targets.
    std::string_view target_class() const noexcept;

    /// Throws Error on an empty id or an owner on a HavePerson.
    void validate() const;

    friend bool operator==(const Command&, const Command&) = default;
};

inline bool command_equals(const Command& a, const Command& b) { return a == b; }

/// Canonical order: kind (HavePerson first), then id.
bool canonical_less(const Command& a, const Command& b) noexcept;

/// Single-line rendering for diagnostics and transcripts.
std::string describe(const Command& cmd);

/// Applies a HavePerson to the editor's model (not its store). Returns the id.
std::string run_have_person(const Command& cmd, Editor& editor);
/// Applies a HaveDog to the editor's model (not its store). Returns the id.
std::string run_have_dog(const Command& cmd, Editor& editor);
/// Dispatches on kind.
std::string run(const Command& cmd, Editor& editor);

} // namespace evmigrate
