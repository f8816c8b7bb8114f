#pragma once

#include "dfx_ahp/error.hpp"
#include "dfx_ahp/hierarchy.hpp"
#include "dfx_ahp/judgment.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dfx_ahp {

// JSON document form:
//   {goal, layers:[{name, nodes:[{name, parent}]}], alternatives:[...],
//    judgments:[{context, row, col, grade, inverted}]}
// row/col are child names; integer child indices are accepted on input.

namespace detail {

inline void check_fields(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& pointer, bool strict) {
    if (!obj.is_object()) throw Error(ErrorCode::SchemaViolation, "expected an object", {{"pointer", pointer}});
    if (!strict) return;
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || item.key() == a;
        if (!ok) {
            throw Error(ErrorCode::SchemaViolation, "unknown field '" + item.key() + "'",
                        {{"pointer", pointer + "/" + item.key()}, {"field", item.key()}});
        }
    }
}

template <class T>
T required(const nlohmann::json& obj, const char* key, const std::string& pointer) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::SchemaViolation, std::string("missing field '") + key + "'", {{"pointer", pointer}});
    }
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::SchemaViolation, std::string("field '") + key + "' has the wrong type",
                    {{"pointer", pointer + "/" + key}});
    }
}

/// Children of `context` as declared by the (unvalidated) document.
inline std::vector<std::string> declared_children(const HierarchyDocument& doc, const std::string& context) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < doc.layers.size(); ++k) {
        bool in_layer = false;
        for (const auto& n : doc.layers[k].nodes) {
            const std::string& parent = (k == 0 && n.parent.empty()) ? doc.goal : n.parent;
            if (parent == context) out.push_back(n.name);
            in_layer = in_layer || n.name == context;
        }
        if (in_layer && k + 1 == doc.layers.size()) return doc.alternatives;
    }
    return out;
}

}  // namespace detail

inline HierarchyDocument parse_document(const nlohmann::json& j, bool strict = true) {
    using detail::required;
    detail::check_fields(j, {"goal", "layers", "alternatives", "judgments"}, "", strict);
    HierarchyDocument doc;
    doc.goal = required<std::string>(j, "goal", "");

    const auto layers = required<nlohmann::json>(j, "layers", "");
    if (!layers.is_array()) throw Error(ErrorCode::SchemaViolation, "layers must be an array", {{"pointer", "/layers"}});
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string lp = "/layers/" + std::to_string(k);
        detail::check_fields(layers[k], {"name", "nodes"}, lp, strict);
        LayerSpec layer;
        layer.name = layers[k].value("name", std::string{});
        const auto nodes = required<nlohmann::json>(layers[k], "nodes", lp);
        if (!nodes.is_array()) throw Error(ErrorCode::SchemaViolation, "nodes must be an array", {{"pointer", lp + "/nodes"}});
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string np = lp + "/nodes/" + std::to_string(i);
            detail::check_fields(nodes[i], {"name", "parent"}, np, strict);
            NodeSpec node;
            node.name = required<std::string>(nodes[i], "name", np);
            if (auto p = nodes[i].find("parent"); p != nodes[i].end() && !p->is_null()) {
                if (!p->is_string()) throw Error(ErrorCode::SchemaViolation, "parent must be a string", {{"pointer", np + "/parent"}});
                node.parent = p->get<std::string>();
            }
            layer.nodes.push_back(std::move(node));
        }
        doc.layers.push_back(std::move(layer));
    }
    doc.alternatives = required<std::vector<std::string>>(j, "alternatives", "");

    if (auto js = j.find("judgments"); js != j.end()) {
        if (!js->is_array()) throw Error(ErrorCode::SchemaViolation, "judgments must be an array", {{"pointer", "/judgments"}});
        for (std::size_t k = 0; k < js->size(); ++k) {
            const auto& rec = (*js)[k];
            const std::string jp = "/judgments/" + std::to_string(k);
            detail::check_fields(rec, {"context", "row", "col", "grade", "inverted"}, jp, strict);
            JudgmentRecord out;
            out.context = required<std::string>(rec, "context", jp);
            auto child = [&](const char* key) {
                auto it = rec.find(key);
                if (it == rec.end()) throw Error(ErrorCode::SchemaViolation, std::string("missing field '") + key + "'", {{"pointer", jp}});
                if (it->is_string()) return it->get<std::string>();
                if (it->is_number_unsigned()) {
                    const auto children = detail::declared_children(doc, out.context);
                    const auto idx = it->get<std::size_t>();
                    if (idx < children.size()) return children[idx];
                    throw Error(ErrorCode::InvalidPair,
                                std::string(key) + " index " + std::to_string(idx) + " out of range for '" + out.context + "'",
                                {{"pointer", jp + "/" + key}});
                }
                throw Error(ErrorCode::SchemaViolation, std::string(key) + " must be a name or index", {{"pointer", jp + "/" + key}});
            };
            out.row = child("row");
            out.col = child("col");
            const int grade = required<int>(rec, "grade", jp);
            const bool inverted = rec.contains("inverted") ? required<bool>(rec, "inverted", jp) : false;
            try {
                out.judgment = Judgment(grade, inverted);
            } catch (const Error& e) {
                throw Error(e.code(), e.message(), {{"pointer", jp + "/grade"}, {"grade", grade}});
            }
            doc.judgments.push_back(std::move(out));
        }
    }
    return doc;
}

inline nlohmann::json to_json(const JudgmentRecord& r) {
    return {{"context", r.context},
            {"row", r.row},
            {"col", r.col},
            {"grade", r.judgment.grade()},
            {"inverted", r.judgment.inverted()}};
}

inline nlohmann::json to_json(const HierarchyDocument& doc) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : doc.layers) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : l.nodes) nodes.push_back({{"name", n.name}, {"parent", n.parent}});
        layers.push_back({{"name", l.name}, {"nodes", std::move(nodes)}});
    }
    nlohmann::json judgments = nlohmann::json::array();
    for (const auto& r : doc.judgments) judgments.push_back(to_json(r));
    return {{"goal", doc.goal}, {"layers", std::move(layers)}, {"alternatives", doc.alternatives}, {"judgments", std::move(judgments)}};
}

/// 1-based line of the value addressed by `pointer` in `text`, if found.
inline std::optional<std::size_t> locate_json_pointer(std::string_view text, std::string_view pointer) {
    std::vector<std::string> tokens;
    for (std::size_t pos = 0; pos < pointer.size();) {
        if (pointer[pos] != '/') return std::nullopt;
        const auto next = pointer.find('/', pos + 1);
        tokens.emplace_back(pointer.substr(pos + 1, next == std::string_view::npos ? std::string_view::npos : next - pos - 1));
        pos = next == std::string_view::npos ? pointer.size() : next;
    }

    std::size_t i = 0;
    auto ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\n' || text[i] == '\r' || text[i] == '\t')) ++i;
    };
    auto read_string = [&]() -> std::string {
        std::string s;
        ++i;  // opening quote
        while (i < text.size() && text[i] != '"') {
            if (text[i] == '\\' && i + 1 < text.size()) ++i;
            s += text[i++];
        }
        ++i;
        return s;
    };
    // Skips one value starting at i.
    auto skip = [&](auto&& self) -> void {
        ws();
        if (i >= text.size()) return;
        if (text[i] == '"') {
            read_string();
        } else if (text[i] == '{' || text[i] == '[') {
            const char close = text[i] == '{' ? '}' : ']';
            ++i;
            ws();
            while (i < text.size() && text[i] != close) {
                if (close == '}') {
                    read_string();
                    ws();
                    ++i;  // colon
                }
                self(self);
                ws();
                if (i < text.size() && text[i] == ',') ++i;
                ws();
            }
            ++i;
        } else {
            while (i < text.size() && std::string_view(",]} \n\r\t").find(text[i]) == std::string_view::npos) ++i;
        }
    };

    for (const auto& tok : tokens) {
        ws();
        if (i >= text.size()) return std::nullopt;
        if (text[i] == '{') {
            ++i;
            bool found = false;
            while (true) {
                ws();
                if (i >= text.size() || text[i] == '}') return std::nullopt;
                const auto key = read_string();
                ws();
                ++i;  // colon
                if (key == tok) {
                    found = true;
                    break;
                }
                skip(skip);
                ws();
                if (i < text.size() && text[i] == ',') ++i;
            }
            if (!found) return std::nullopt;
        } else if (text[i] == '[') {
            ++i;
            std::size_t target = 0;
            try {
                target = std::stoul(tok);
            } catch (const std::exception&) {
                return std::nullopt;
            }
            for (std::size_t k = 0; k < target; ++k) {
                ws();
                if (i >= text.size() || text[i] == ']') return std::nullopt;
                skip(skip);
                ws();
                if (i < text.size() && text[i] == ',') ++i;
            }
        } else {
            return std::nullopt;
        }
    }
    ws();
    std::size_t line = 1;
    for (std::size_t k = 0; k < i && k < text.size(); ++k) line += text[k] == '\n';
    return line;
}

/// Parses document text; syntax errors become SchemaViolation with "line"/"column" details.
inline HierarchyDocument parse_document_text(std::string_view text, bool strict = true) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorCode::SchemaViolation, "malformed JSON", {{"line", line}, {"column", column}});
    }
    try {
        return parse_document(j, strict);
    } catch (const Error& e) {
        auto details = e.details();
        if (details.contains("pointer")) {
            if (auto line = locate_json_pointer(text, details["pointer"].get<std::string>())) details["line"] = *line;
        }
        throw Error(e.code(), e.message(), details);
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'", {{"path", path}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline HierarchyDocument load_document(const std::string& path, bool strict = true) {
    return parse_document_text(read_text_file(path), strict);
}

}  // namespace dfx_ahp
