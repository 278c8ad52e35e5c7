#include "evmigrate/metamodel.hpp"

#include "evmigrate/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <set>

namespace evmigrate {

std::string_view to_string(AttrKind kind)
{
    return kind == AttrKind::String ? "string" : "int";
}

std::string_view to_string(Multiplicity multiplicity)
{
    return multiplicity == Multiplicity::One ? "one" : "many";
}

const AttributeDecl* MetaClass::find_attribute(std::string_view attr) const noexcept
{
    const auto it = std::ranges::find(attributes, attr, &AttributeDecl::name);
    return it == attributes.end() ? nullptr : &*it;
}

const ReferenceDecl* MetaClass::find_reference(std::string_view ref) const noexcept
{
    const auto it = std::ranges::find(references, ref, &ReferenceDecl::name);
    return it == references.end() ? nullptr : &*it;
}

MetaModel::MetaModel(std::string name, std::vector<MetaClass> classes)
    : name_(std::move(name))
    , classes_(std::move(classes))
{
    std::set<std::string_view> class_names;
    for (const auto& cls : classes_) {
        if (!class_names.insert(cls.name).second)
            throw Error("duplicate class '" + cls.name + "'");
    }
    for (const auto& cls : classes_) {
        std::set<std::string_view> features;
        for (const auto& attr : cls.attributes) {
            if (!features.insert(attr.name).second)
                throw Error("duplicate feature '" + attr.name + "' in class " + cls.name);
        }
        for (const auto& ref : cls.references) {
            if (!features.insert(ref.name).second)
                throw Error("duplicate feature '" + ref.name + "' in class " + cls.name);
            if (!class_names.contains(ref.target))
                throw Error("reference " + cls.name + "." + ref.name + " targets unknown class '" + ref.target + "'");
        }
    }
}

const MetaClass* MetaModel::find_class(std::string_view class_name) const noexcept
{
    const auto it = std::ranges::find(classes_, class_name, &MetaClass::name);
    return it == classes_.end() ? nullptr : &*it;
}

const MetaClass& MetaModel::get_class(std::string_view class_name) const
{
    if (const auto* cls = find_class(class_name))
        return *cls;
    throw Error("unknown class '" + std::string(class_name) + "'");
}

MetaModel load_schema(std::string_view source, std::string name)
{
    std::vector<MetaClass> classes;
    std::set<std::string, std::less<>> features;
    struct PendingRef {
        int line;
        std::string target;
    };
    std::vector<PendingRef> pending;

    for (const auto& line : text::significant_lines(source)) {
        const auto toks = text::tokens(line.body);
        if (line.indent == 0) {
            if (toks[0] != "class" || toks.size() != 2)
                throw ParseError(line.number, "expected 'class <Name>'");
            if (std::ranges::find(classes, toks[1], &MetaClass::name) != classes.end())
                throw ParseError(line.number, "duplicate class '" + std::string(toks[1]) + "'");
            classes.push_back(MetaClass{std::string(toks[1]), {}, {}});
            features.clear();
            continue;
        }
        if (line.indent != 2)
            throw ParseError(line.number, "members must be indented by two spaces");
        if (classes.empty())
            throw ParseError(line.number, "member declared outside a class");

        auto& cls = classes.back();
        if (toks[0] == "attr") {
            if (toks.size() != 3)
                throw ParseError(line.number, "expected 'attr <name> <string|int>'");
            AttrKind kind;
            if (toks[2] == "string")
                kind = AttrKind::String;
            else if (toks[2] == "int")
                kind = AttrKind::Integer;
            else
                throw ParseError(line.number, "unknown attribute kind '" + std::string(toks[2]) + "'");
            if (!features.emplace(toks[1]).second)
                throw ParseError(line.number, "duplicate feature '" + std::string(toks[1]) + "' in class " + cls.name);
            cls.attributes.push_back({std::string(toks[1]), kind});
        } else if (toks[0] == "ref") {
            if (toks.size() != 5 || toks[2] != "->")
                throw ParseError(line.number, "expected 'ref <name> -> <Class> <one|many>'");
            Multiplicity multiplicity;
            if (toks[4] == "one")
                multiplicity = Multiplicity::One;
            else if (toks[4] == "many")
                multiplicity = Multiplicity::Many;
            else
                throw ParseError(line.number, "unknown multiplicity '" + std::string(toks[4]) + "'");
            if (!features.emplace(toks[1]).second)
                throw ParseError(line.number, "duplicate feature '" + std::string(toks[1]) + "' in class " + cls.name);
            cls.references.push_back({std::string(toks[1]), std::string(toks[3]), multiplicity});
            pending.push_back({line.number, std::string(toks[3])});
        } else {
            throw ParseError(line.number, "unknown member keyword '" + std::string(toks[0]) + "'");
        }
    }

    for (const auto& ref : pending) {
        if (std::ranges::find(classes, ref.target, &MetaClass::name) == classes.end())
            throw ParseError(ref.line, "unresolved reference target '" + ref.target + "'");
    }
    return MetaModel(std::move(name), std::move(classes));
}

SchemaPtr load_schema_ptr(std::string_view source, std::string name)
{
    return std::make_shared<const MetaModel>(load_schema(source, std::move(name)));
}

bool has_attribute(const MetaModel& model, std::string_view class_name, std::string_view attr)
{
    return model.get_class(class_name).find_attribute(attr) != nullptr;
}

AttrKind kind_of(const Value& value) noexcept
{
    return std::holds_alternative<std::string>(value) ? AttrKind::String : AttrKind::Integer;
}

std::string format_value(const Value& value)
{
    if (const auto* s = std::get_if<std::string>(&value))
        return *s;
    return std::to_string(std::get<std::int64_t>(value));
}

// ---------------------------------------------------------------------------

DynamicObject::DynamicObject(SchemaPtr schema, std::string id, std::string_view class_name)
    : schema_(std::move(schema))
    , class_(&schema_->get_class(class_name))
    , id_(std::move(id))
{
    if (id_.empty())
        throw Error("object id must not be empty");
}

const AttributeDecl& DynamicObject::attribute_decl(std::string_view name) const
{
    if (const auto* decl = class_->find_attribute(name))
        return *decl;
    throw Error("class " + class_->name + " has no attribute '" + std::string(name) + "'");
}

const ReferenceDecl& DynamicObject::reference_decl(std::string_view name) const
{
    if (const auto* decl = class_->find_reference(name))
        return *decl;
    throw Error("class " + class_->name + " has no reference '" + std::string(name) + "'");
}

void DynamicObject::set_attribute(std::string_view name, Value value)
{
    const auto& decl = attribute_decl(name);
    if (kind_of(value) != decl.kind) {
        throw Error("attribute " + class_->name + "." + decl.name + " expects " + std::string(to_string(decl.kind)) +
                    ", got " + std::string(to_string(kind_of(value))));
    }
    if (auto it = attributes_.find(name); it != attributes_.end())
        it->second = std::move(value);
    else
        attributes_.emplace(decl.name, std::move(value));
}

void DynamicObject::clear_attribute(std::string_view name)
{
    attribute_decl(name);
    if (auto it = attributes_.find(name); it != attributes_.end())
        attributes_.erase(it);
}

std::optional<Value> DynamicObject::get_attribute(std::string_view name) const
{
    attribute_decl(name);
    const auto it = attributes_.find(name);
    if (it == attributes_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::int64_t> DynamicObject::get_int(std::string_view name) const
{
    if (attribute_decl(name).kind != AttrKind::Integer)
        throw Error("attribute " + class_->name + "." + std::string(name) + " is not an int");
    const auto it = attributes_.find(name);
    if (it == attributes_.end())
        return std::nullopt;
    return std::get<std::int64_t>(it->second);
}

std::optional<std::string> DynamicObject::get_string(std::string_view name) const
{
    if (attribute_decl(name).kind != AttrKind::String)
        throw Error("attribute " + class_->name + "." + std::string(name) + " is not a string");
    const auto it = attributes_.find(name);
    if (it == attributes_.end())
        return std::nullopt;
    return std::get<std::string>(it->second);
}

void DynamicObject::set_reference(std::string_view name, std::string target_id)
{
    const auto& decl = reference_decl(name);
    if (target_id.empty())
        throw Error("empty reference target for " + class_->name + "." + decl.name);
    auto& targets = references_[decl.name];
    if (decl.multiplicity == Multiplicity::One) {
        targets.assign(1, std::move(target_id));
    } else if (std::ranges::find(targets, target_id) == targets.end()) {
        targets.push_back(std::move(target_id));
    }
}

void DynamicObject::clear_reference(std::string_view name)
{
    reference_decl(name);
    if (auto it = references_.find(name); it != references_.end())
        references_.erase(it);
}

std::span<const std::string> DynamicObject::reference_targets(std::string_view name) const
{
    reference_decl(name);
    const auto it = references_.find(name);
    if (it == references_.end())
        return {};
    return it->second;
}

// ---------------------------------------------------------------------------

InstanceModel::InstanceModel(SchemaPtr schema)
    : schema_(std::move(schema))
{
    if (!schema_)
        throw Error("instance model requires a schema");
}

DynamicObject& InstanceModel::create(std::string id, std::string_view class_name)
{
    if (objects_.contains(id))
        throw Error("duplicate object id '" + id + "'");
    DynamicObject obj(schema_, id, class_name);
    auto [it, inserted] = objects_.emplace(id, std::move(obj));
    order_.push_back(std::move(id));
    return it->second;
}

DynamicObject* InstanceModel::find(std::string_view id) noexcept
{
    const auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : &it->second;
}

const DynamicObject* InstanceModel::find(std::string_view id) const noexcept
{
    const auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : &it->second;
}

DynamicObject& InstanceModel::at(std::string_view id)
{
    if (auto* obj = find(id))
        return *obj;
    throw Error("unknown object id '" + std::string(id) + "'");
}

const DynamicObject& InstanceModel::at(std::string_view id) const
{
    if (const auto* obj = find(id))
        return *obj;
    throw Error("unknown object id '" + std::string(id) + "'");
}

std::string InstanceModel::unique_id(std::string_view preferred) const
{
    if (!contains(preferred))
        return std::string(preferred);
    for (std::size_t n = 1;; ++n) {
        auto candidate = std::string(preferred) + "_" + std::to_string(n);
        if (!contains(candidate))
            return candidate;
    }
}

void InstanceModel::validate() const
{
    for (const auto& id : order_) {
        const auto& obj = objects_.at(id);
        for (const auto& decl : obj.meta_class().references) {
            for (const auto& target : obj.reference_targets(decl.name)) {
                const auto* t = find(target);
                if (t == nullptr)
                    throw Error("object " + id + " references missing object '" + target + "' via " + decl.name);
                if (t->class_name() != decl.target) {
                    throw Error("object " + id + " references " + target + " of class " + t->class_name() + " via " +
                                decl.name + ", expected " + decl.target);
                }
            }
        }
    }
}

bool model_equals(const InstanceModel& a, const InstanceModel& b)
{
    if (a.size() != b.size())
        return false;
    for (const auto& id : a.ids()) {
        const auto& x = a.at(id);
        const auto* y = b.find(id);
        if (y == nullptr || x.class_name() != y->class_name())
            return false;
        if (x.attributes() != y->attributes())
            return false;
        if (x.references().size() != y->references().size())
            return false;
        for (const auto& [name, targets] : x.references()) {
            const auto it = y->references().find(name);
            if (it == y->references().end())
                return false;
            auto lhs = targets;
            auto rhs = it->second;
            std::ranges::sort(lhs);
            std::ranges::sort(rhs);
            if (lhs != rhs)
                return false;
        }
    }
    return true;
}

} // namespace evmigrate
