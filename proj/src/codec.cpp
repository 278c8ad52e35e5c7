#include "evmigrate/codec.hpp"

#include "evmigrate/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <set>

namespace evmigrate {

namespace {

void append_field(std::string& out, std::string_view key, std::string_view value)
{
    if (!text::is_line_safe(value))
        throw Error("value for '" + std::string(key) + "' cannot be encoded on one line");
    out += "    ";
    out += key;
    out += ':';
    if (!value.empty()) {
        out += ' ';
        out += value;
    }
    out += '\n';
}

std::pair<std::string_view, std::string_view> split_key(const text::Line& line, std::string_view body)
{
    const auto colon = body.find(':');
    if (colon == std::string_view::npos)
        throw ParseError(line.number, "expected 'key: value'");
    return {text::trim(body.substr(0, colon)), text::trim(body.substr(colon + 1))};
}

int header_int(const text::Line& line, std::string_view expected_key)
{
    const auto [key, value] = split_key(line, line.body);
    if (line.indent != 0 || key != expected_key)
        throw ParseError(line.number, "expected '" + std::string(expected_key) + ": <int>'");
    const auto parsed = text::parse_int(value);
    if (!parsed || *parsed < 0 || *parsed > 1'000'000)
        throw ParseError(line.number, "bad integer '" + std::string(value) + "'");
    return static_cast<int>(*parsed);
}

struct BlockBuilder {
    int line = 0;
    std::optional<CommandKind> kind;
    std::optional<std::string> id;
    std::optional<std::string> name;
    std::optional<std::int64_t> age;
    std::optional<std::string> owner_id;
    std::set<std::string, std::less<>> seen;

    void field(const text::Line& at, std::string_view key, std::string_view value)
    {
        if (!seen.emplace(key).second)
            throw ParseError(at.number, "duplicate field '" + std::string(key) + "'");
        if (key == "command") {
            kind = parse_command_kind(value);
            if (!kind)
                throw ParseError(at.number, "unknown command kind '" + std::string(value) + "'");
        } else if (key == "id") {
            id = std::string(value);
        } else if (key == "ownerId") {
            owner_id = std::string(value);
        } else if (key == "name") {
            name = std::string(value);
        } else if (key == "age") {
            age = text::parse_int(value);
            if (!age)
                throw ParseError(at.number, "age is not an integer: '" + std::string(value) + "'");
        } else {
            throw ParseError(at.number, "unknown field '" + std::string(key) + "'");
        }
    }

    Command finish() const
    {
        if (!kind)
            throw ParseError(line, "command block without 'command'");
        if (!id)
            throw ParseError(line, "command block without 'id'");
        Command cmd{*kind, *id, name, age, owner_id};
        try {
            cmd.validate();
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
        return cmd;
    }
};

} // namespace

std::string encode_log(std::span<const Command> commands, int reference_year)
{
    std::vector<Command> sorted(commands.begin(), commands.end());
    std::ranges::sort(sorted, canonical_less);

    std::string out;
    out += "format: " + std::to_string(log_format_version) + "\n";
    out += "referenceYear: " + std::to_string(reference_year) + "\n";
    out += "commands:\n";
    for (const auto& cmd : sorted) {
        cmd.validate();
        out += "  - command: ";
        out += to_string(cmd.kind);
        out += '\n';
        append_field(out, "id", cmd.id);
        if (cmd.owner_id)
            append_field(out, "ownerId", *cmd.owner_id);
        if (cmd.name)
            append_field(out, "name", *cmd.name);
        if (cmd.age)
            append_field(out, "age", std::to_string(*cmd.age));
    }
    return out;
}

std::string encode_log(const EventStore& store, int reference_year)
{
    return encode_log(store.commands(), reference_year);
}

CommandLogDocument decode_log(std::string_view source)
{
    const auto lines = text::significant_lines(source);
    if (lines.size() < 3)
        throw ParseError(lines.empty() ? 1 : lines.back().number, "truncated command log header");

    CommandLogDocument doc;
    doc.format_version = header_int(lines[0], "format");
    if (doc.format_version != log_format_version)
        throw ParseError(lines[0].number, "unsupported format version " + std::to_string(doc.format_version));
    doc.reference_year = header_int(lines[1], "referenceYear");
    if (doc.reference_year <= 0)
        throw ParseError(lines[1].number, "referenceYear must be positive");
    if (lines[2].indent != 0 || lines[2].body != "commands:")
        throw ParseError(lines[2].number, "expected 'commands:'");

    std::optional<BlockBuilder> block;
    std::set<std::string, std::less<>> ids;
    auto flush = [&] {
        if (!block)
            return;
        auto cmd = block->finish();
        if (!ids.insert(cmd.id).second)
            throw ParseError(block->line, "duplicate id '" + cmd.id + "'");
        doc.commands.push_back(std::move(cmd));
        block.reset();
    };

    for (std::size_t i = 3; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.indent == 2 && line.body.starts_with("- ")) {
            flush();
            block.emplace();
            block->line = line.number;
            const auto [key, value] = split_key(line, line.body.substr(2));
            block->field(line, key, value);
        } else if (line.indent == 4 && block) {
            const auto [key, value] = split_key(line, line.body);
            block->field(line, key, value);
        } else {
            throw ParseError(line.number, "malformed command log line");
        }
    }
    flush();

    std::ranges::sort(doc.commands, canonical_less);
    return doc;
}

// ---------------------------------------------------------------------------

std::string encode_model(const InstanceModel& model)
{
    std::string out;
    for (const auto& id : model.ids()) {
        const auto& obj = model.at(id);
        if (text::tokens(id).size() != 1 || id.front() == '#')
            throw Error("object id '" + id + "' is not a single token");
        out += "obj " + id + " " + obj.class_name() + "\n";
        for (const auto& attr : obj.meta_class().attributes) {
            const auto value = obj.get_attribute(attr.name);
            if (!value)
                continue;
            const auto rendered = format_value(*value);
            if (!text::is_line_safe(rendered))
                throw Error("attribute " + id + "." + attr.name + " cannot be encoded on one line");
            out += "  " + attr.name;
            if (!rendered.empty())
                out += " " + rendered;
            out += "\n";
        }
        for (const auto& ref : obj.meta_class().references) {
            for (const auto& target : obj.reference_targets(ref.name))
                out += "  " + ref.name + " " + target + "\n";
        }
    }
    return out;
}

InstanceModel decode_model(std::string_view source, SchemaPtr schema)
{
    InstanceModel model(std::move(schema));
    struct RefLine {
        int line;
        std::string object;
        std::string ref;
        std::string target;
    };
    std::vector<RefLine> refs;
    DynamicObject* current = nullptr;
    std::set<std::string, std::less<>> seen_features;

    for (const auto& line : text::significant_lines(source)) {
        if (line.indent == 0) {
            const auto toks = text::tokens(line.body);
            if (toks.size() != 3 || toks[0] != "obj")
                throw ParseError(line.number, "expected 'obj <id> <Class>'");
            if (model.contains(toks[1]))
                throw ParseError(line.number, "duplicate object id '" + std::string(toks[1]) + "'");
            if (!model.schema().has_class(toks[2]))
                throw ParseError(line.number, "unknown class '" + std::string(toks[2]) + "'");
            current = &model.create(std::string(toks[1]), toks[2]);
            seen_features.clear();
            continue;
        }
        if (line.indent != 2)
            throw ParseError(line.number, "features must be indented by two spaces");
        if (current == nullptr)
            throw ParseError(line.number, "feature outside an object");

        const auto [feature, rest] = text::head_and_rest(line.body);
        const auto& cls = current->meta_class();
        if (const auto* attr = cls.find_attribute(feature)) {
            if (!seen_features.emplace(feature).second)
                throw ParseError(line.number, "attribute '" + attr->name + "' set twice");
            if (attr->kind == AttrKind::Integer) {
                const auto value = text::parse_int(rest);
                if (!value)
                    throw ParseError(line.number, "attribute '" + attr->name + "' expects int, got '" + std::string(rest) + "'");
                current->set_attribute(attr->name, *value);
            } else {
                current->set_attribute(attr->name, std::string(rest));
            }
        } else if (const auto* ref = cls.find_reference(feature)) {
            if (text::tokens(rest).size() != 1)
                throw ParseError(line.number, "reference '" + ref->name + "' expects one target id");
            if (ref->multiplicity == Multiplicity::One && !seen_features.emplace(feature).second)
                throw ParseError(line.number, "reference '" + ref->name + "' set twice");
            current->set_reference(ref->name, std::string(rest));
            refs.push_back({line.number, current->id(), ref->name, std::string(rest)});
        } else {
            throw ParseError(line.number, "class " + cls.name + " has no feature '" + std::string(feature) + "'");
        }
    }

    for (const auto& r : refs) {
        const auto* target = model.find(r.target);
        if (target == nullptr)
            throw ParseError(r.line, "reference " + r.ref + " of " + r.object + " names missing object '" + r.target + "'");
        const auto& expected = model.at(r.object).meta_class().find_reference(r.ref)->target;
        if (target->class_name() != expected)
            throw ParseError(r.line, "reference " + r.ref + " of " + r.object + " expects " + expected + ", '" + r.target +
                                         "' is a " + target->class_name());
    }
    return model;
}

} // namespace evmigrate
