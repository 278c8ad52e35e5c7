#pragma once

#include "evmigrate/commands.hpp"
#include "evmigrate/editor.hpp"
#include "evmigrate/metamodel.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evmigrate {

inline constexpr int log_format_version = 1;

struct CommandLogDocument {
    int format_version = log_format_version;
    int reference_year = ReferenceYear::default_year;
    std::vector<Command> commands; // canonical (kind, id) order

    friend bool operator==(const CommandLogDocument&, const CommandLogDocument&) = default;
};

/// Canonical command-log text. Commands are written in (kind, id) order with
/// UNSET fields omitted. Throws Error for a string that cannot survive the
/// to-end-of-line encoding (embedded newline, surrounding whitespace).
std::string encode_log(std::span<const Command> commands, int reference_year);
std::string encode_log(const EventStore& store, int reference_year);

/// Accepts blocks and fields in any order; the result is canonically sorted.
/// Throws ParseError on malformed lines, unknown kinds, duplicate ids and
/// unsupported versions.
CommandLogDocument decode_log(std::string_view text);

/// Instance file text: objects in insertion order, features in schema order.
std::string encode_model(const InstanceModel& model);

/// Throws ParseError with the line of the offending declaration.
InstanceModel decode_model(std::string_view text, SchemaPtr schema);

} // namespace evmigrate
