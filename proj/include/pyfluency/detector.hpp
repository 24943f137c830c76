#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pyfluency/ast.hpp"
#include "pyfluency/catalog.hpp"
#include "pyfluency/level.hpp"

namespace pyfluency {

/// One detected construct instance. Positions mirror the matched node:
/// 1-based line span (end inclusive) and 0-based start column.
struct Occurrence {
    std::string construct;
    std::string display_name;
    int start_line = 0;
    int end_line = 0;
    int displacement = 0;
    Level level = kA1;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

/// A pattern over one node and its ancestor chain. When several rules match
/// the same node, the highest specificity wins; ties go to the first id in
/// lexicographic order. A node is classified at most once.
struct DetectionRule {
    std::string id;
    int specificity = 0;
    std::vector<NodeKind> node_kinds;
    std::function<bool(const Node&, const std::vector<const Node*>&)> matches;
};

namespace rules {

inline bool is_container_display(const Node& n) {
    return n.kind == NodeKind::List || n.kind == NodeKind::Dict || n.kind == NodeKind::Set ||
           n.kind == NodeKind::Tuple;
}

inline bool call_to_name(const Node& call, std::string_view name) {
    return !call.children.empty() && call.children[0].kind == NodeKind::Name &&
           call.children[0].text == name;
}

inline bool dict_value_satisfies(const Node& dict, const std::function<bool(const Node&)>& pred) {
    for (const Node& entry : dict.children)
        if (entry.kind == NodeKind::DictItem && pred(entry.children[1])) return true;
    return false;
}

inline bool dict_is_flat(const Node& dict) {
    for (const Node& entry : dict.children) {
        if (entry.kind == NodeKind::DictItem) {
            if (is_container_display(entry.children[0]) || is_container_display(entry.children[1]))
                return false;
        } else if (entry.kind == NodeKind::DictUnpack) {
            if (is_container_display(entry.children[0])) return false;
        }
    }
    return true;
}

inline bool is_main_guard_test(const Node& test) {
    if (test.kind != NodeKind::Compare || test.children.size() != 3) return false;
    const Node& op = test.children[1];
    if (op.kind != NodeKind::CompareOp || op.text != "==") return false;
    auto dunder_name = [](const Node& n) {
        return n.kind == NodeKind::Name && n.text == "__name__";
    };
    auto main_string = [](const Node& n) {
        return n.kind == NodeKind::Str && !n.is_bytes && !n.is_fstring && n.text == "__main__";
    };
    return (dunder_name(test.children[0]) && main_string(test.children[2])) ||
           (dunder_name(test.children[2]) && main_string(test.children[0]));
}

/// True when the function body yields, not counting nested defs, lambdas and
/// classes (their yields belong to them).
inline bool subtree_yields(const Node& n) {
    for (const Node& child : n.children) {
        if (child.kind == NodeKind::Yield || child.kind == NodeKind::YieldFrom) return true;
        if (child.kind == NodeKind::FunctionDef || child.kind == NodeKind::Lambda ||
            child.kind == NodeKind::ClassDef)
            continue;
        if (subtree_yields(child)) return true;
    }
    return false;
}

inline bool function_is_generator(const Node& def) {
    const Node* body = def.find_child(NodeKind::Body);
    return body != nullptr && subtree_yields(*body);
}

inline bool in_class_body(const std::vector<const Node*>& ancestors) {
    size_t n = ancestors.size();
    return n >= 2 && ancestors[n - 1]->kind == NodeKind::Body &&
           ancestors[n - 2]->kind == NodeKind::ClassDef;
}

inline bool assigns_name(const Node& stmt, std::string_view name) {
    if (stmt.kind == NodeKind::Assign) {
        const Node* targets = stmt.find_child(NodeKind::Targets);
        if (!targets) return false;
        for (const Node& target : targets->children)
            if (target.kind == NodeKind::Name && target.text == name) return true;
        return false;
    }
    if (stmt.kind == NodeKind::AnnAssign)
        return !stmt.children.empty() && stmt.children[0].kind == NodeKind::Name &&
               stmt.children[0].text == name;
    return false;
}

/// Kind of definition a decorator is attached to, via its Decorated parent.
inline const Node* decorated_definition(const std::vector<const Node*>& ancestors) {
    if (ancestors.empty() || ancestors.back()->kind != NodeKind::Decorated) return nullptr;
    const Node& decorated = *ancestors.back();
    return decorated.children.empty() ? nullptr : &decorated.children.back();
}

inline bool class_defines_context_protocol(const Node& class_def) {
    const Node* body = class_def.find_child(NodeKind::Body);
    if (!body) return false;
    bool has_enter = false, has_exit = false;
    for (const Node& stmt : body->children) {
        const Node* def = &stmt;
        if (stmt.kind == NodeKind::Decorated && !stmt.children.empty())
            def = &stmt.children.back();
        if (def->kind != NodeKind::FunctionDef) continue;
        if (def->text == "__enter__") has_enter = true;
        if (def->text == "__exit__") has_exit = true;
    }
    return has_enter && has_exit;
}

inline bool class_has_metaclass_keyword(const Node& class_def) {
    const Node* bases = class_def.find_child(NodeKind::Arguments);
    if (!bases) return false;
    for (const Node& arg : bases->children)
        if (arg.kind == NodeKind::KeywordArg && arg.text == "metaclass") return true;
    return false;
}

}  // namespace rules

/// The fixed rule registry. Exactly one rule per catalog construct id.
inline const std::vector<DetectionRule>& detection_rules() {
    using Kinds = std::vector<NodeKind>;
    using Ancestors = std::vector<const Node*>;
    static const std::vector<DetectionRule> registry = [] {
        std::vector<DetectionRule> r;
        auto add = [&r](std::string id, int specificity, Kinds kinds,
                        std::function<bool(const Node&, const Ancestors&)> matches) {
            r.push_back(DetectionRule{std::move(id), specificity, std::move(kinds),
                                      std::move(matches)});
        };

        add("print-call", 0, {NodeKind::Call},
            [](const Node& n, const Ancestors&) { return rules::call_to_name(n, "print"); });
        add("open-call", 0, {NodeKind::Call},
            [](const Node& n, const Ancestors&) { return rules::call_to_name(n, "open"); });

        add("if-statement", 0, {NodeKind::If},
            [](const Node&, const Ancestors&) { return true; });
        add("main-guard", 1, {NodeKind::If}, [](const Node& n, const Ancestors&) {
            return !n.children.empty() && rules::is_main_guard_test(n.children[0]);
        });

        add("list-literal", 0, {NodeKind::List},
            [](const Node&, const Ancestors&) { return true; });
        add("nested-list", 1, {NodeKind::List}, [](const Node& n, const Ancestors&) {
            return n.find_child(NodeKind::List) != nullptr;
        });
        add("list-with-dictionary", 2, {NodeKind::List}, [](const Node& n, const Ancestors&) {
            return n.find_child(NodeKind::Dict) != nullptr;
        });

        add("simple-dictionary", 0, {NodeKind::Dict},
            [](const Node& n, const Ancestors&) { return rules::dict_is_flat(n); });
        add("nested-dictionary", 1, {NodeKind::Dict}, [](const Node& n, const Ancestors&) {
            return rules::dict_value_satisfies(
                n, [](const Node& value) { return value.kind == NodeKind::Dict; });
        });
        add("dict-of-lists-of-dicts", 2, {NodeKind::Dict}, [](const Node& n, const Ancestors&) {
            return rules::dict_value_satisfies(n, [](const Node& value) {
                return value.kind == NodeKind::List &&
                       value.find_child(NodeKind::Dict) != nullptr;
            });
        });

        add("with-statement", 0, {NodeKind::With},
            [](const Node&, const Ancestors&) { return true; });
        add("list-comprehension", 0, {NodeKind::ListComp},
            [](const Node&, const Ancestors&) { return true; });
        add("lambda-expression", 0, {NodeKind::Lambda},
            [](const Node&, const Ancestors&) { return true; });
        add("dunder-dict-attribute", 0, {NodeKind::Attribute},
            [](const Node& n, const Ancestors&) { return n.text == "__dict__"; });
        add("dunder-slots", 0, {NodeKind::Assign, NodeKind::AnnAssign},
            [](const Node& n, const Ancestors& ancestors) {
                return rules::in_class_body(ancestors) && rules::assigns_name(n, "__slots__");
            });

        add("function-def", 0, {NodeKind::FunctionDef},
            [](const Node&, const Ancestors&) { return true; });
        add("async-function", 1, {NodeKind::FunctionDef},
            [](const Node& n, const Ancestors&) { return n.is_async; });
        add("generator-function", 2, {NodeKind::FunctionDef},
            [](const Node& n, const Ancestors&) { return rules::function_is_generator(n); });

        add("function-decorator", 0, {NodeKind::Decorator},
            [](const Node&, const Ancestors& ancestors) {
                const Node* def = rules::decorated_definition(ancestors);
                return def != nullptr && def->kind == NodeKind::FunctionDef;
            });
        add("class-decorator", 0, {NodeKind::Decorator},
            [](const Node&, const Ancestors& ancestors) {
                const Node* def = rules::decorated_definition(ancestors);
                return def != nullptr && def->kind == NodeKind::ClassDef;
            });
        add("property-decorator", 1, {NodeKind::Decorator},
            [](const Node& n, const Ancestors& ancestors) {
                const Node* def = rules::decorated_definition(ancestors);
                return def != nullptr && def->kind == NodeKind::FunctionDef &&
                       !n.children.empty() && n.children[0].kind == NodeKind::Name &&
                       n.children[0].text == "property";
            });

        add("class-def", 0, {NodeKind::ClassDef},
            [](const Node&, const Ancestors&) { return true; });
        add("context-manager-protocol", 1, {NodeKind::ClassDef},
            [](const Node& n, const Ancestors&) {
                return rules::class_defines_context_protocol(n);
            });
        add("metaclass", 2, {NodeKind::ClassDef}, [](const Node& n, const Ancestors&) {
            return rules::class_has_metaclass_keyword(n);
        });

        add("for-statement", 0, {NodeKind::For},
            [](const Node&, const Ancestors&) { return true; });
        add("while-statement", 0, {NodeKind::While},
            [](const Node&, const Ancestors&) { return true; });
        add("import", 0, {NodeKind::Import, NodeKind::ImportFrom},
            [](const Node&, const Ancestors&) { return true; });
        add("try-except", 0, {NodeKind::Try},
            [](const Node&, const Ancestors&) { return true; });
        add("tuple-literal", 0, {NodeKind::Tuple},
            [](const Node&, const Ancestors&) { return true; });
        add("generator-expression", 0, {NodeKind::GeneratorExp},
            [](const Node&, const Ancestors&) { return true; });
        add("dict-comprehension", 0, {NodeKind::DictComp},
            [](const Node&, const Ancestors&) { return true; });
        add("set-comprehension", 0, {NodeKind::SetComp},
            [](const Node&, const Ancestors&) { return true; });
        add("yield-from", 0, {NodeKind::YieldFrom},
            [](const Node&, const Ancestors&) { return true; });

        add("star-args", 0,
            {NodeKind::VarArgsParam, NodeKind::KwArgsParam, NodeKind::Starred,
             NodeKind::DoubleStarArg},
            [](const Node& n, const Ancestors& ancestors) {
                if (n.kind == NodeKind::Starred)
                    return !ancestors.empty() &&
                           ancestors.back()->kind == NodeKind::Arguments;
                return true;
            });

        add("string-formatting", 0, {NodeKind::Str, NodeKind::BinOp, NodeKind::Call},
            [](const Node& n, const Ancestors&) {
                if (n.kind == NodeKind::Str) return n.is_fstring;
                if (n.kind == NodeKind::BinOp)
                    return n.text == "%" && !n.children.empty() &&
                           n.children[0].kind == NodeKind::Str;
                return !n.children.empty() && n.children[0].kind == NodeKind::Attribute &&
                       n.children[0].text == "format";
            });

        return r;
    }();
    return registry;
}

/// Startup invariant: every registered rule id resolves in the mapping.
/// Throws with the full list of missing ids.
inline void verify_rules_covered(const LevelMapping& mapping) {
    std::string missing;
    for (const DetectionRule& rule : detection_rules()) {
        if (!mapping.contains(rule.id)) {
            if (!missing.empty()) missing += ", ";
            missing += rule.id;
        }
    }
    if (!missing.empty())
        throw std::runtime_error("level mapping is missing detector rule ids: " + missing);
}

/// Walks the tree and emits one classified Occurrence per matched node,
/// ordered by (start line, displacement, construct id).
inline std::vector<Occurrence> detect(const SyntaxTree& tree, const LevelMapping& mapping) {
    static const std::map<NodeKind, std::vector<const DetectionRule*>> by_kind = [] {
        std::map<NodeKind, std::vector<const DetectionRule*>> index;
        for (const DetectionRule& rule : detection_rules())
            for (NodeKind kind : rule.node_kinds) index[kind].push_back(&rule);
        return index;
    }();

    std::vector<Occurrence> found;
    walk_tree(tree.root, [&](const Node& node, const std::vector<const Node*>& ancestors) {
        auto it = by_kind.find(node.kind);
        if (it == by_kind.end()) return;
        const DetectionRule* winner = nullptr;
        for (const DetectionRule* rule : it->second) {
            if (!rule->matches(node, ancestors)) continue;
            if (winner == nullptr || rule->specificity > winner->specificity ||
                (rule->specificity == winner->specificity && rule->id < winner->id))
                winner = rule;
        }
        if (winner == nullptr) return;
        Occurrence occ;
        occ.construct = winner->id;
        occ.display_name = std::string(display_name_of(winner->id));
        occ.start_line = node.line;
        occ.end_line = node.end_line;
        occ.displacement = node.col;
        occ.level = mapping.level_for(winner->id);
        found.push_back(std::move(occ));
    });

    std::stable_sort(found.begin(), found.end(), [](const Occurrence& a, const Occurrence& b) {
        if (a.start_line != b.start_line) return a.start_line < b.start_line;
        if (a.displacement != b.displacement) return a.displacement < b.displacement;
        return a.construct < b.construct;
    });
    return found;
}

}  // namespace pyfluency
