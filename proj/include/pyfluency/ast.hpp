#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pyfluency {

enum class NodeKind : unsigned char {
    Module,

    // simple statements
    ExprStmt, Assign, AugAssign, AnnAssign, Return, Pass, Break, Continue,
    Delete, Import, ImportFrom, Global, Nonlocal, Assert, Raise,

    // compound statements
    If, While, For, With, Try, FunctionDef, ClassDef, Decorated, Match, MatchCase,

    // clause and helper nodes
    Body, OrElse, FinallyBody, ExceptHandler, WithItem, AsTarget, Targets,
    Decorator, Params, Param, VarArgsParam, KwArgsParam, Default, Annotation,
    Arguments, KeywordArg, DoubleStarArg, Alias, ImportStar, DictItem,
    DictUnpack, CompFor, CompIf, CompareOp, Slice, Empty, FromCause,

    // expressions
    BoolOp, BinOp, UnaryOp, Lambda, IfExp, Dict, Set, List, Tuple,
    ListComp, SetComp, DictComp, GeneratorExp, Await, Yield, YieldFrom,
    Compare, Call, Number, Str, Name, Constant, Attribute, Subscript,
    Starred, NamedExpr,
};

/// Generic syntax-tree node. `text` holds the identifier, attribute name,
/// operator spelling or decoded string value, depending on the kind. Lines are
/// 1-based, columns are 0-based byte offsets; end_line is inclusive.
struct Node {
    NodeKind kind = NodeKind::Module;
    std::string text;
    int line = 0;
    int col = 0;
    int end_line = 0;
    int end_col = 0;
    bool is_async = false;    // FunctionDef / For / With / CompFor
    bool is_fstring = false;  // Str
    bool is_bytes = false;    // Str
    std::vector<Node> children;

    const Node* find_child(NodeKind k) const {
        for (const Node& child : children)
            if (child.kind == k) return &child;
        return nullptr;
    }

    bool has_child(NodeKind k) const { return find_child(k) != nullptr; }
};

inline std::string_view node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::Module: return "Module";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Assign: return "Assign";
    case NodeKind::AugAssign: return "AugAssign";
    case NodeKind::AnnAssign: return "AnnAssign";
    case NodeKind::Return: return "Return";
    case NodeKind::Pass: return "Pass";
    case NodeKind::Break: return "Break";
    case NodeKind::Continue: return "Continue";
    case NodeKind::Delete: return "Delete";
    case NodeKind::Import: return "Import";
    case NodeKind::ImportFrom: return "ImportFrom";
    case NodeKind::Global: return "Global";
    case NodeKind::Nonlocal: return "Nonlocal";
    case NodeKind::Assert: return "Assert";
    case NodeKind::Raise: return "Raise";
    case NodeKind::If: return "If";
    case NodeKind::While: return "While";
    case NodeKind::For: return "For";
    case NodeKind::With: return "With";
    case NodeKind::Try: return "Try";
    case NodeKind::FunctionDef: return "FunctionDef";
    case NodeKind::ClassDef: return "ClassDef";
    case NodeKind::Decorated: return "Decorated";
    case NodeKind::Match: return "Match";
    case NodeKind::MatchCase: return "MatchCase";
    case NodeKind::Body: return "Body";
    case NodeKind::OrElse: return "OrElse";
    case NodeKind::FinallyBody: return "FinallyBody";
    case NodeKind::ExceptHandler: return "ExceptHandler";
    case NodeKind::WithItem: return "WithItem";
    case NodeKind::AsTarget: return "AsTarget";
    case NodeKind::Targets: return "Targets";
    case NodeKind::Decorator: return "Decorator";
    case NodeKind::Params: return "Params";
    case NodeKind::Param: return "Param";
    case NodeKind::VarArgsParam: return "VarArgsParam";
    case NodeKind::KwArgsParam: return "KwArgsParam";
    case NodeKind::Default: return "Default";
    case NodeKind::Annotation: return "Annotation";
    case NodeKind::Arguments: return "Arguments";
    case NodeKind::KeywordArg: return "KeywordArg";
    case NodeKind::DoubleStarArg: return "DoubleStarArg";
    case NodeKind::Alias: return "Alias";
    case NodeKind::ImportStar: return "ImportStar";
    case NodeKind::DictItem: return "DictItem";
    case NodeKind::DictUnpack: return "DictUnpack";
    case NodeKind::CompFor: return "CompFor";
    case NodeKind::CompIf: return "CompIf";
    case NodeKind::CompareOp: return "CompareOp";
    case NodeKind::Slice: return "Slice";
    case NodeKind::Empty: return "Empty";
    case NodeKind::FromCause: return "FromCause";
    case NodeKind::BoolOp: return "BoolOp";
    case NodeKind::BinOp: return "BinOp";
    case NodeKind::UnaryOp: return "UnaryOp";
    case NodeKind::Lambda: return "Lambda";
    case NodeKind::IfExp: return "IfExp";
    case NodeKind::Dict: return "Dict";
    case NodeKind::Set: return "Set";
    case NodeKind::List: return "List";
    case NodeKind::Tuple: return "Tuple";
    case NodeKind::ListComp: return "ListComp";
    case NodeKind::SetComp: return "SetComp";
    case NodeKind::DictComp: return "DictComp";
    case NodeKind::GeneratorExp: return "GeneratorExp";
    case NodeKind::Await: return "Await";
    case NodeKind::Yield: return "Yield";
    case NodeKind::YieldFrom: return "YieldFrom";
    case NodeKind::Compare: return "Compare";
    case NodeKind::Call: return "Call";
    case NodeKind::Number: return "Number";
    case NodeKind::Str: return "Str";
    case NodeKind::Name: return "Name";
    case NodeKind::Constant: return "Constant";
    case NodeKind::Attribute: return "Attribute";
    case NodeKind::Subscript: return "Subscript";
    case NodeKind::Starred: return "Starred";
    case NodeKind::NamedExpr: return "NamedExpr";
    default: return "?";
    }
}

struct SyntaxTree {
    Node root;  // kind == Module
};

/// Produced instead of a tree, never alongside one. Line 0 means the file
/// could not even be decoded as UTF-8.
struct ParseFailure {
    std::string path;
    int line = 0;
    std::string message;
};

using ParseOutcome = std::variant<SyntaxTree, ParseFailure>;

/// Depth-first walk; `fn` receives each node with its ancestor chain
/// (outermost first, parent last).
inline void walk_tree(const Node& root,
                      const std::function<void(const Node&, const std::vector<const Node*>&)>& fn) {
    std::vector<const Node*> ancestors;
    struct Recurse {
        const std::function<void(const Node&, const std::vector<const Node*>&)>& fn;
        std::vector<const Node*>& ancestors;
        void operator()(const Node& node) const {
            fn(node, ancestors);
            ancestors.push_back(&node);
            for (const Node& child : node.children) (*this)(child);
            ancestors.pop_back();
        }
    } recurse{fn, ancestors};
    recurse(root);
}

}  // namespace pyfluency
