#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace evmigrate {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <typename T>
using StringMap = std::unordered_map<std::string, T, StringHash, std::equal_to<>>;

enum class AttrKind { String, Integer };
enum class Multiplicity { One, Many };

std::string_view to_string(AttrKind kind);
std::string_view to_string(Multiplicity multiplicity);

struct AttributeDecl {
    std::string name;
    AttrKind kind = AttrKind::String;

    friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

struct ReferenceDecl {
    std::string name;
    std::string target;
    Multiplicity multiplicity = Multiplicity::One;

    friend bool operator==(const ReferenceDecl&, const ReferenceDecl&) = default;
};

struct MetaClass {
    std::string name;
    std::vector<AttributeDecl> attributes;
    std::vector<ReferenceDecl> references;

    const AttributeDecl* find_attribute(std::string_view attr) const noexcept;
    const ReferenceDecl* find_reference(std::string_view ref) const noexcept;

    friend bool operator==(const MetaClass&, const MetaClass&) = default;
};

/// Runtime-queryable schema. Immutable once validated; instances share it
/// through SchemaPtr.
class MetaModel {
public:
    MetaModel() = default;
    /// Throws Error on duplicate names or unresolved reference targets.
    MetaModel(std::string name, std::vector<MetaClass> classes);

    const std::string& name() const noexcept { return name_; }
    const std::vector<MetaClass>& classes() const noexcept { return classes_; }

    const MetaClass* find_class(std::string_view class_name) const noexcept;
    /// Throws Error for an undeclared class.
    const MetaClass& get_class(std::string_view class_name) const;
    bool has_class(std::string_view class_name) const noexcept { return find_class(class_name) != nullptr; }

    /// Structural equality over classes; the model name is a label only.
    bool same_structure(const MetaModel& other) const noexcept { return classes_ == other.classes_; }

private:
    std::string name_;
    std::vector<MetaClass> classes_;
};

using SchemaPtr = std::shared_ptr<const MetaModel>;

/// Parses the line-oriented schema grammar. Errors carry the offending line.
MetaModel load_schema(std::string_view source, std::string name = "schema");
SchemaPtr load_schema_ptr(std::string_view source, std::string name = "schema");

/// Throws Error when the class is not declared.
bool has_attribute(const MetaModel& model, std::string_view class_name, std::string_view attr);

using Value = std::variant<std::int64_t, std::string>;

AttrKind kind_of(const Value& value) noexcept;
std::string format_value(const Value& value);

/// Schema-conforming instance. Absent attributes are UNSET, which is
/// distinct from "" and 0.
class DynamicObject {
public:
    DynamicObject(SchemaPtr schema, std::string id, std::string_view class_name);

    const std::string& id() const noexcept { return id_; }
    const std::string& class_name() const noexcept { return class_->name; }
    const MetaClass& meta_class() const noexcept { return *class_; }

    void set_attribute(std::string_view name, Value value);
    void clear_attribute(std::string_view name);
    std::optional<Value> get_attribute(std::string_view name) const;
    std::optional<std::int64_t> get_int(std::string_view name) const;
    std::optional<std::string> get_string(std::string_view name) const;

    /// `one`: replaces the previous target. `many`: appends unless present.
    void set_reference(std::string_view name, std::string target_id);
    void clear_reference(std::string_view name);
    std::span<const std::string> reference_targets(std::string_view name) const;

    const StringMap<Value>& attributes() const noexcept { return attributes_; }
    const StringMap<std::vector<std::string>>& references() const noexcept { return references_; }

private:
    const AttributeDecl& attribute_decl(std::string_view name) const;
    const ReferenceDecl& reference_decl(std::string_view name) const;

    SchemaPtr schema_;
    const MetaClass* class_;
    std::string id_;
    StringMap<Value> attributes_;
    StringMap<std::vector<std::string>> references_;
};

/// Objects keyed by id, iterated in insertion order.
class InstanceModel {
public:
    explicit InstanceModel(SchemaPtr schema);

    const MetaModel& schema() const noexcept { return *schema_; }
    const SchemaPtr& schema_ptr() const noexcept { return schema_; }

    /// Throws Error on duplicate id or undeclared class.
    DynamicObject& create(std::string id, std::string_view class_name);

    DynamicObject* find(std::string_view id) noexcept;
    const DynamicObject* find(std::string_view id) const noexcept;
    DynamicObject& at(std::string_view id);
    const DynamicObject& at(std::string_view id) const;
    bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }

    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }
    /// Ids in insertion order.
    const std::vector<std::string>& ids() const noexcept { return order_; }

    /// `preferred` if unused, otherwise `preferred_<n>` for the smallest free n.
    std::string unique_id(std::string_view preferred) const;

    /// Throws Error if a reference names a missing object or one of the wrong class.
    void validate() const;

private:
    SchemaPtr schema_;
    StringMap<DynamicObject> objects_;
    std::vector<std::string> order_;
};

/// Same ids; per id same class, attributes and reference targets.
/// Insertion order and the governing schema are not compared.
bool model_equals(const InstanceModel& a, const InstanceModel& b);

} // namespace evmigrate
