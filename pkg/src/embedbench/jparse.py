"""Java parsing, normalized to the shared Ast form.

A recursive-descent parser over the Java 8 constructs that occur in
method-level benchmark corpora: type declarations, generics, lambdas,
method references, anonymous classes, arrays, try/catch/finally and the
full expression grammar. Node labels follow the conventional Java AST
naming (MethodDeclaration, MemberReference, ...). Accepts whole
compilation units, bare member declarations (the common shape of clone
benchmark snippets), or plain statement sequences.

Leaf tokens are placed in source order, so the in-order leaf
concatenation is a subsequence of the lexed token stream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .astcore import Ast, AstBuilder
from .errors import ParseError
from .lexing import strip_comments

KEYWORDS = frozenset("""
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
""".split())

PRIMITIVES = frozenset(
    "boolean byte char short int long float double void".split())

MODIFIERS = frozenset("""
    public protected private static final abstract native synchronized
    transient volatile strictfp default
""".split())

# '>' is always lexed alone so generic closers never collide with shift
# operators; the expression parser re-joins adjacent '>' tokens.
_JTOKEN_RE = re.compile(
    r"""
    "(?:\\.|[^"\\])*"            |
    '(?:\\.|[^'\\])*'            |
    0[xX][0-9a-fA-F_]+[lL]?      |
    0[bB][01_]+[lL]?             |
    (?:\d[\d_]*\.[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?[fFdD]? |
    \d[\d_]*(?:[eE][+-]?\d+)?[fFdDlL]? |
    [A-Za-z_$][A-Za-z_0-9$]*     |
    <<=|<<|<=|->|::|\+\+|--|==|!=|&&|\|\||\+=|-=|\*=|/=|%=|&=|\^=|\|=|\.\.\.|
    [{}()\[\];,.<>+\-*/%&|^!~?:=@]
    """,
    re.VERBOSE,
)


@dataclass
class Tok:
    text: str
    line: int
    col: int
    kind: str  # ident | keyword | number | string | char | op | eof


def tokenize_java(text: str) -> list[Tok]:
    text = strip_comments(text)
    toks: list[Tok] = []
    line, col, pos = 1, 1, 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch in " \t\r\f":
            pos += 1
            col += 1
            continue
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        m = _JTOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {ch!r}", line=line, column=col)
        raw = m.group(0)
        if raw[0].isdigit() or (raw[0] == "." and len(raw) > 1 and raw[1].isdigit()):
            kind = "number"
        elif raw[0] == '"':
            kind = "string"
        elif raw[0] == "'":
            kind = "char"
        elif raw[0].isalpha() or raw[0] in "_$":
            kind = "keyword" if raw in KEYWORDS else "ident"
        else:
            kind = "op"
        toks.append(Tok(raw, line, col, kind))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    toks.append(Tok("", line, col, "eof"))
    return toks


@dataclass
class JNode:
    """Parse-tree node; flattened into the shared Ast afterwards."""

    label: str
    token: str | None = None
    children: list["JNode"] = field(default_factory=list)

    def add(self, *nodes: "JNode | None") -> "JNode":
        for node in nodes:
            if node is not None:
                self.children.append(node)
        return self

    def leaf(self, token: str, label: str | None = None) -> "JNode":
        self.children.append(JNode(label or self.label, token=token))
        return self


def _flatten(root: JNode, source_id: str) -> Ast:
    builder = AstBuilder(source_id=source_id)

    def rec(node: JNode, parent: int | None) -> None:
        nid = builder.add(node.label, token=node.token, parent=parent)
        for child in node.children:
            rec(child, nid)

    rec(root, None)
    return builder.build()


class _Parser:
    def __init__(self, toks: list[Tok]) -> None:
        self.toks = toks
        self.pos = 0

    # --- token plumbing -------------------------------------------------
    @property
    def tok(self) -> Tok:
        return self.toks[self.pos]

    def at(self, text: str) -> bool:
        return self.tok.text == text

    def at_any(self, *texts: str) -> bool:
        return self.tok.text in texts

    def advance(self) -> Tok:
        tok = self.tok
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text!r}")
        return self.advance()

    def error(self, message: str) -> None:
        raise ParseError(message, line=self.tok.line, column=self.tok.col)

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.error(f"expected identifier, found {self.tok.text!r}")
        return self.advance().text

    def _adjacent(self, offset: int) -> bool:
        if self.pos + offset >= len(self.toks):
            return False
        a, b = self.toks[self.pos + offset - 1], self.toks[self.pos + offset]
        return b.line == a.line and b.col == a.col + len(a.text)

    def shift_op(self) -> str | None:
        """Join adjacent '>' tokens into >>/>>> (and >=) where they occur."""
        if not self.at(">"):
            return None
        texts = [t.text for t in self.toks[self.pos:self.pos + 4]]
        texts += [""] * (4 - len(texts))
        if texts[1] == ">" and self._adjacent(1):
            if texts[2] == ">" and self._adjacent(2):
                if texts[3] == "=" and self._adjacent(3):
                    return ">>>="
                return ">>>"
            if texts[2] == "=" and self._adjacent(2):
                return ">>="
            return ">>"
        if texts[1] == "=" and self._adjacent(1):
            return ">="
        return ">"

    def take_shift(self, op: str) -> None:
        for _ in range(len(op)):
            self.advance()

    # --- speculation ----------------------------------------------------
    def _try(self, fn, *args):
        saved = self.pos
        try:
            return fn(*args)
        except ParseError:
            self.pos = saved
            return None

    # --- entry points ---------------------------------------------------
    def compilation_unit(self) -> JNode:
        root = JNode("CompilationUnit")
        if self.at("package"):
            self.advance()
            pkg = JNode("PackageDeclaration")
            self._qualified_name_leaves(pkg)
            self.expect(";")
            root.add(pkg)
        while self.at("import"):
            self.advance()
            imp = JNode("Import")
            if self.at("static"):
                imp.leaf(self.advance().text)
            self._qualified_name_leaves(imp)
            if self.at("."):  # trailing .*
                self.advance()
                self.expect("*")
            self.expect(";")
            root.add(imp)
        while not self.at(""):
            if self.at(";"):
                self.advance()
                continue
            root.add(self.type_declaration())
        if not root.children:
            self.error("empty compilation unit")
        return root

    def member_snippet(self) -> JNode:
        members = []
        while not self.at(""):
            if self.at(";"):
                self.advance()
                continue
            members.append(self.class_member())
        if not members:
            self.error("no member declaration")
        if len(members) == 1:
            return members[0]
        return JNode("CompilationUnit").add(*members)

    def statement_snippet(self) -> JNode:
        block = JNode("BlockStatement")
        while not self.at(""):
            block.add(self.block_statement())
        if not block.children:
            self.error("no statements")
        return block

    def _qualified_name_leaves(self, node: JNode) -> None:
        node.leaf(self.ident())
        while self.at(".") and self.toks[self.pos + 1].kind == "ident":
            self.advance()
            node.leaf(self.ident())

    # --- declarations ---------------------------------------------------
    def modifiers(self) -> list[JNode]:
        out: list[JNode] = []
        while True:
            if self.tok.text in MODIFIERS and self.tok.kind == "keyword":
                out.append(JNode("Modifier", token=self.advance().text))
            elif self.at("@") and self.toks[self.pos + 1].text != "interface":
                out.append(self.annotation())
            else:
                return out

    def annotation(self) -> JNode:
        self.expect("@")
        node = JNode("Annotation")
        self._qualified_name_leaves(node)
        if self.at("("):
            self.advance()
            while not self.at(")"):
                if (self.tok.kind == "ident" and
                        self.toks[self.pos + 1].text == "="):
                    pair = JNode("ElementValuePair")
                    pair.leaf(self.ident())
                    self.advance()
                    pair.add(self.element_value())
                    node.add(pair)
                else:
                    node.add(self.element_value())
                if self.at(","):
                    self.advance()
            self.expect(")")
        return node

    def element_value(self) -> JNode:
        if self.at("@"):
            return self.annotation()
        if self.at("{"):
            self.advance()
            arr = JNode("ElementArrayValue")
            while not self.at("}"):
                arr.add(self.element_value())
                if self.at(","):
                    self.advance()
            self.expect("}")
            return arr
        return self.expression()

    def type_declaration(self) -> JNode:
        mods = self.modifiers()
        if self.at("class"):
            return self.class_declaration(mods)
        if self.at("interface"):
            return self.interface_declaration(mods)
        if self.at("enum"):
            return self.enum_declaration(mods)
        if self.at("@") and self.toks[self.pos + 1].text == "interface":
            self.advance()
            self.advance()
            node = JNode("AnnotationDeclaration").add(*mods)
            node.leaf(self.ident())
            self._skip_balanced_block(node)
            return node
        self.error(f"expected type declaration, found {self.tok.text!r}")

    def _skip_balanced_block(self, node: JNode) -> None:
        # annotation-type bodies are rare; retain tokens without structure
        self.expect("{")
        depth = 1
        while depth and not self.at(""):
            if self.at("{"):
                depth += 1
            elif self.at("}"):
                depth -= 1
                if not depth:
                    break
            node.leaf(self.advance().text)
        self.expect("}")

    def class_declaration(self, mods: list[JNode]) -> JNode:
        self.expect("class")
        node = JNode("ClassDeclaration").add(*mods)
        node.leaf(self.ident())
        self.type_parameters(node)
        if self.at("extends"):
            self.advance()
            node.add(self.parse_type())
        if self.at("implements"):
            self.advance()
            node.add(self.parse_type())
            while self.at(","):
                self.advance()
                node.add(self.parse_type())
        self.class_body(node)
        return node

    def interface_declaration(self, mods: list[JNode]) -> JNode:
        self.expect("interface")
        node = JNode("InterfaceDeclaration").add(*mods)
        node.leaf(self.ident())
        self.type_parameters(node)
        if self.at("extends"):
            self.advance()
            node.add(self.parse_type())
            while self.at(","):
                self.advance()
                node.add(self.parse_type())
        self.class_body(node)
        return node

    def enum_declaration(self, mods: list[JNode]) -> JNode:
        self.expect("enum")
        node = JNode("EnumDeclaration").add(*mods)
        node.leaf(self.ident())
        if self.at("implements"):
            self.advance()
            node.add(self.parse_type())
            while self.at(","):
                self.advance()
                node.add(self.parse_type())
        self.expect("{")
        while self.tok.kind == "ident":
            const = JNode("EnumConstantDeclaration")
            const.leaf(self.ident())
            if self.at("("):
                const.add(self.arguments())
            if self.at("{"):
                body = JNode("ClassDeclaration")
                self.class_body(body)
                const.add(body)
            node.add(const)
            if self.at(","):
                self.advance()
            else:
                break
        if self.at(";"):
            self.advance()
            while not self.at("}"):
                node.add(self.class_member())
        self.expect("}")
        return node

    def type_parameters(self, node: JNode) -> None:
        if not self.at("<"):
            return
        self.advance()
        while True:
            param = JNode("TypeParameter")
            param.leaf(self.ident())
            if self.at("extends"):
                self.advance()
                param.add(self.parse_type())
                while self.at("&"):
                    self.advance()
                    param.add(self.parse_type())
            node.add(param)
            if self.at(","):
                self.advance()
                continue
            self._close_generic()
            return

    def _close_generic(self) -> None:
        if self.at(">"):
            self.advance()
            return
        self.error(f"expected '>', found {self.tok.text!r}")

    def class_body(self, node: JNode) -> None:
        self.expect("{")
        while not self.at("}"):
            if self.at(";"):
                self.advance()
                continue
            node.add(self.class_member())
        self.expect("}")

    def class_member(self) -> JNode:
        mods = self.modifiers()
        if self.at("class"):
            return self.class_declaration(mods)
        if self.at("interface"):
            return self.interface_declaration(mods)
        if self.at("enum"):
            return self.enum_declaration(mods)
        if self.at("{"):  # initializer block (mods may hold 'static')
            node = JNode("InitializerBlock").add(*mods)
            node.add(self.block())
            return node
        type_params: list[JNode] = []
        if self.at("<"):
            holder = JNode("_tp")
            self.type_parameters(holder)
            type_params = holder.children
        # constructor: Name ( ... )
        if self.tok.kind == "ident" and self.toks[self.pos + 1].text == "(":
            node = JNode("ConstructorDeclaration").add(*mods, *type_params)
            node.leaf(self.ident())
            node.add(self.formal_parameters())
            self.throws_clause(node)
            node.add(self.block())
            return node
        decl_type = self.parse_type()
        name = self.ident()
        if self.at("("):
            node = JNode("MethodDeclaration").add(*mods, *type_params)
            node.add(decl_type)
            node.leaf(name)
            node.add(self.formal_parameters())
            while self.at("["):  # archaic trailing dims
                self.advance()
                self.expect("]")
            self.throws_clause(node)
            if self.at(";"):
                self.advance()
            elif self.at("default"):
                self.advance()
                node.add(self.element_value())
                self.expect(";")
            else:
                node.add(self.block())
            return node
        node = JNode("FieldDeclaration").add(*mods)
        node.add(decl_type)
        node.add(self.variable_declarator(name))
        while self.at(","):
            self.advance()
            node.add(self.variable_declarator(self.ident()))
        self.expect(";")
        return node

    def throws_clause(self, node: JNode) -> None:
        if self.at("throws"):
            self.advance()
            node.add(self.parse_type())
            while self.at(","):
                self.advance()
                node.add(self.parse_type())

    def variable_declarator(self, name: str) -> JNode:
        node = JNode("VariableDeclarator")
        node.leaf(name)
        while self.at("["):
            self.advance()
            self.expect("]")
        if self.at("="):
            self.advance()
            node.add(self.variable_initializer())
        return node

    def variable_initializer(self) -> JNode:
        if self.at("{"):
            return self.array_initializer()
        return self.expression()

    def array_initializer(self) -> JNode:
        self.expect("{")
        node = JNode("ArrayInitializer")
        while not self.at("}"):
            node.add(self.variable_initializer())
            if self.at(","):
                self.advance()
        self.expect("}")
        return node

    def formal_parameters(self) -> JNode:
        self.expect("(")
        node = JNode("FormalParameters")
        while not self.at(")"):
            param = JNode("FormalParameter").add(*self.modifiers())
            param.add(self.parse_type())
            if self.at("..."):
                self.advance()
            param.leaf(self.ident())
            while self.at("["):
                self.advance()
                self.expect("]")
            node.add(param)
            if self.at(","):
                self.advance()
        self.expect(")")
        return node

    # --- types ----------------------------------------------------------
    def parse_type(self) -> JNode:
        if self.tok.text in PRIMITIVES:
            node = JNode("BasicType", token=None)
            node.leaf(self.advance().text)
        else:
            node = JNode("ReferenceType")
            if self.tok.kind != "ident":
                self.error(f"expected type, found {self.tok.text!r}")
            node.leaf(self.ident())
            self.type_arguments(node)
            while self.at(".") and self.toks[self.pos + 1].kind == "ident":
                self.advance()
                node.leaf(self.ident())
                self.type_arguments(node)
        while self.at("[") and self.toks[self.pos + 1].text == "]":
            self.advance()
            self.advance()
            node = JNode("ArrayType").add(node)
        return node

    def type_arguments(self, node: JNode) -> None:
        if not self.at("<"):
            return
        self.advance()
        if self.shift_op() == ">":  # diamond <>
            self.advance()
            return
        while True:
            arg = JNode("TypeArgument")
            if self.at("?"):
                self.advance()
                if self.at_any("extends", "super"):
                    self.advance()
                    arg.add(self.parse_type())
            else:
                arg.add(self.parse_type())
            node.add(arg)
            if self.at(","):
                self.advance()
                continue
            self._close_generic()
            return

    def _looks_like_type_ahead(self) -> bool:
        """Speculatively parse a type and require a plausible declarator."""
        saved = self.pos
        try:
            self.parse_type()
            ok = self.tok.kind == "ident"
            return ok
        except ParseError:
            return False
        finally:
            self.pos = saved

    # --- statements -----------------------------------------------------
    def block(self) -> JNode:
        self.expect("{")
        node = JNode("BlockStatement")
        while not self.at("}"):
            node.add(self.block_statement())
        self.expect("}")
        return node

    def block_statement(self) -> JNode:
        if self.at_any("final", "@") or (
                self.tok.text in PRIMITIVES or self._looks_like_type_ahead()):
            decl = self._try(self.local_variable_statement)
            if decl is not None:
                return decl
        if self.at_any("class", "abstract"):
            return self.type_declaration()
        return self.statement()

    def local_variable_statement(self) -> JNode:
        node = JNode("LocalVariableDeclaration").add(*self.modifiers())
        node.add(self.parse_type())
        node.add(self.variable_declarator(self.ident()))
        while self.at(","):
            self.advance()
            node.add(self.variable_declarator(self.ident()))
        self.expect(";")
        return node

    def statement(self) -> JNode:
        t = self.tok.text
        if t == "{":
            return self.block()
        if t == ";":
            self.advance()
            return JNode("EmptyStatement")
        if t == "if":
            self.advance()
            node = JNode("IfStatement")
            self.expect("(")
            node.add(self.expression())
            self.expect(")")
            node.add(self.statement())
            if self.at("else"):
                self.advance()
                node.add(self.statement())
            return node
        if t == "while":
            self.advance()
            node = JNode("WhileStatement")
            self.expect("(")
            node.add(self.expression())
            self.expect(")")
            node.add(self.statement())
            return node
        if t == "do":
            self.advance()
            node = JNode("DoStatement")
            node.add(self.statement())
            self.expect("while")
            self.expect("(")
            node.add(self.expression())
            self.expect(")")
            self.expect(";")
            return node
        if t == "for":
            return self.for_statement()
        if t == "try":
            return self.try_statement()
        if t == "switch":
            return self.switch_statement()
        if t == "synchronized":
            self.advance()
            node = JNode("SynchronizedStatement")
            self.expect("(")
            node.add(self.expression())
            self.expect(")")
            node.add(self.block())
            return node
        if t == "return":
            self.advance()
            node = JNode("ReturnStatement")
            if not self.at(";"):
                node.add(self.expression())
            self.expect(";")
            return node
        if t == "throw":
            self.advance()
            node = JNode("ThrowStatement").add(self.expression())
            self.expect(";")
            return node
        if t == "break":
            self.advance()
            node = JNode("BreakStatement")
            if self.tok.kind == "ident":
                node.leaf(self.ident())
            self.expect(";")
            return node
        if t == "continue":
            self.advance()
            node = JNode("ContinueStatement")
            if self.tok.kind == "ident":
                node.leaf(self.ident())
            self.expect(";")
            return node
        if t == "assert":
            self.advance()
            node = JNode("AssertStatement").add(self.expression())
            if self.at(":"):
                self.advance()
                node.add(self.expression())
            self.expect(";")
            return node
        if (self.tok.kind == "ident" and
                self.toks[self.pos + 1].text == ":"):
            node = JNode("LabeledStatement")
            node.leaf(self.ident())
            self.advance()
            node.add(self.statement())
            return node
        node = JNode("StatementExpression").add(self.expression())
        self.expect(";")
        return node

    def for_statement(self) -> JNode:
        self.expect("for")
        self.expect("(")
        enhanced = self._try(self._enhanced_for_control)
        if enhanced is not None:
            node = JNode("ForStatement").add(enhanced)
            node.add(self.statement())
            return node
        node = JNode("ForStatement")
        control = JNode("ForControl")
        if not self.at(";"):
            init = self._try(self._for_var_decl)
            if init is None:
                init = JNode("ForInit").add(self.expression())
                while self.at(","):
                    self.advance()
                    init.add(self.expression())
            control.add(init)
        self.expect(";")
        if not self.at(";"):
            control.add(JNode("ForCondition").add(self.expression()))
        self.expect(";")
        if not self.at(")"):
            update = JNode("ForUpdate").add(self.expression())
            while self.at(","):
                self.advance()
                update.add(self.expression())
            control.add(update)
        self.expect(")")
        node.add(control)
        node.add(self.statement())
        return node

    def _for_var_decl(self) -> JNode:
        node = JNode("LocalVariableDeclaration").add(*self.modifiers())
        node.add(self.parse_type())
        node.add(self.variable_declarator(self.ident()))
        while self.at(","):
            self.advance()
            node.add(self.variable_declarator(self.ident()))
        if not self.at(";"):
            self.error("not a for-init declaration")
        return node

    def _enhanced_for_control(self) -> JNode:
        node = JNode("EnhancedForControl").add(*self.modifiers())
        node.add(self.parse_type())
        node.leaf(self.ident())
        self.expect(":")
        node.add(self.expression())
        self.expect(")")
        return node

    def try_statement(self) -> JNode:
        self.expect("try")
        node = JNode("TryStatement")
        if self.at("("):
            self.advance()
            resources = JNode("TryResource")
            while not self.at(")"):
                res = JNode("LocalVariableDeclaration").add(*self.modifiers())
                res.add(self.parse_type())
                res.add(self.variable_declarator(self.ident()))
                resources.add(res)
                if self.at(";"):
                    self.advance()
            self.expect(")")
            node.add(resources)
        node.add(self.block())
        while self.at("catch"):
            self.advance()
            clause = JNode("CatchClause")
            self.expect("(")
            clause.add(*self.modifiers())
            clause.add(self.parse_type())
            while self.at("|"):
                self.advance()
                clause.add(self.parse_type())
            clause.leaf(self.ident())
            self.expect(")")
            clause.add(self.block())
            node.add(clause)
        if self.at("finally"):
            self.advance()
            node.add(JNode("FinallyBlock").add(self.block()))
        return node

    def switch_statement(self) -> JNode:
        self.expect("switch")
        node = JNode("SwitchStatement")
        self.expect("(")
        node.add(self.expression())
        self.expect(")")
        self.expect("{")
        while not self.at("}"):
            case = JNode("SwitchCase")
            if self.at("case"):
                self.advance()
                case.add(self.expression())
            else:
                self.expect("default")
            self.expect(":")
            while not self.at_any("case", "default", "}"):
                case.add(self.block_statement())
            node.add(case)
        self.expect("}")
        return node

    # --- expressions ------------------------------------------------------
    _BINARY_LEVELS = [
        ("||",), ("&&",), ("|",), ("^",), ("&",),
        ("==", "!="),
        ("<", "<=", ">", ">=", "instanceof"),
        ("<<", ">>", ">>>"),
        ("+", "-"), ("*", "/", "%"),
    ]

    def expression(self) -> JNode:
        return self.assignment()

    def assignment(self) -> JNode:
        left = self.ternary()
        op = self.shift_op()
        if op in (">>=", ">>>="):
            self.take_shift(op)
        elif self.tok.text in ("=", "+=", "-=", "*=", "/=", "%=", "&=",
                               "^=", "|=", "<<="):
            op = self.advance().text
        else:
            return left
        node = JNode("Assignment")
        node.add(left)
        node.leaf(op)
        node.add(self.assignment())
        return node

    def ternary(self) -> JNode:
        cond = self.binary(0)
        if not self.at("?"):
            return cond
        self.advance()
        node = JNode("TernaryExpression").add(cond)
        node.add(self.expression())
        self.expect(":")
        node.add(self.assignment())
        return node

    def binary(self, level: int) -> JNode:
        if level >= len(self._BINARY_LEVELS):
            return self.unary()
        ops = self._BINARY_LEVELS[level]
        node = self.binary(level + 1)
        while True:
            op = None
            if ">" in ops or ">=" in ops or ">>" in ops:
                joined = self.shift_op()
                if joined in ops:
                    op = joined
            if op is None and self.tok.text in ops and self.tok.text != ">":
                op = self.tok.text
            if op is None:
                return node
            # '>' at an assignment boundary was handled by shift_op above
            if op == "instanceof":
                self.advance()
                wrap = JNode("BinaryOperation").add(node)
                wrap.leaf("instanceof")
                wrap.add(self.parse_type())
                node = wrap
                continue
            self.take_shift(op) if op.startswith(">") else self.advance()
            wrap = JNode("BinaryOperation").add(node)
            wrap.leaf(op)
            wrap.add(self.binary(level + 1))
            node = wrap

    def unary(self) -> JNode:
        t = self.tok.text
        if t in ("+", "-", "!", "~", "++", "--"):
            self.advance()
            node = JNode("UnaryOperation")
            node.leaf(t)
            node.add(self.unary())
            return node
        cast = self._try(self._cast_expression)
        if cast is not None:
            return cast
        return self.postfix()

    def _cast_expression(self) -> JNode:
        if not self.at("("):
            self.error("not a cast")
        start_kind_primitive = self.toks[self.pos + 1].text in PRIMITIVES
        self.advance()
        typ = self.parse_type()
        self.expect(")")
        nxt = self.tok
        # (a) - b is subtraction, (int) - b is a cast
        if nxt.text in ("+", "-") and not start_kind_primitive:
            self.error("ambiguous cast rejected")
        if (nxt.kind in ("ident", "number", "string", "char") or
                nxt.text in ("(", "!", "~", "this", "super", "new") or
                (nxt.kind == "keyword" and nxt.text in PRIMITIVES) or
                (start_kind_primitive and nxt.text in ("+", "-"))):
            node = JNode("Cast").add(typ)
            node.add(self.unary())
            return node
        self.error("not a cast")

    def postfix(self) -> JNode:
        node = self.primary()
        while True:
            if self.at(".") and (
                    self.toks[self.pos + 1].kind in ("ident", "keyword")
                    or self.toks[self.pos + 1].text == "<"):
                if self.toks[self.pos + 1].text == "class":
                    self.advance()
                    self.advance()
                    node = JNode("ClassReference").add(node)
                    continue
                if self.toks[self.pos + 1].text == "new":
                    self.advance()
                    self.advance()
                    node = JNode("InnerClassCreator").add(node, self.creator_rest())
                    continue
                if self.toks[self.pos + 1].text == "this":
                    self.advance()
                    self.advance()
                    node = JNode("This").add(node)
                    continue
                if self.toks[self.pos + 1].text == "super":
                    self.advance()
                    self.advance()
                    node = JNode("SuperMemberReference").add(node)
                    continue
                self.advance()
                if self.at("<"):
                    self._try(self._explicit_type_args)
                name = self.ident()
                if self.at("("):
                    call = JNode("MethodInvocation").add(node)
                    call.leaf(name)
                    call.add(self.arguments())
                    node = call
                else:
                    ref = JNode("MemberReference").add(node)
                    ref.leaf(name)
                    node = ref
                continue
            if self.at("["):
                self.advance()
                sel = JNode("ArraySelector").add(node)
                sel.add(self.expression())
                self.expect("]")
                node = sel
                continue
            if self.at("::"):
                self.advance()
                ref = JNode("MethodReference").add(node)
                if self.at("<"):
                    self._try(self._explicit_type_args)
                if self.at("new"):
                    self.advance()
                    ref.leaf("new")
                else:
                    ref.leaf(self.ident())
                node = ref
                continue
            if self.at_any("++", "--"):
                # postfix operators attach to the operand node (ID-style)
                node.leaf(self.advance().text, label=node.label)
                continue
            return node

    def _explicit_type_args(self) -> JNode:
        holder = JNode("_ta")
        self.type_arguments(holder)
        if self.tok.kind != "ident" and not self.at("new"):
            self.error("not explicit type arguments")
        return holder

    def arguments(self) -> JNode:
        self.expect("(")
        node = JNode("Arguments")
        while not self.at(")"):
            node.add(self.expression())
            if self.at(","):
                self.advance()
        self.expect(")")
        return node

    def primary(self) -> JNode:
        tok = self.tok
        if tok.kind in ("number", "string", "char"):
            self.advance()
            return JNode("Literal", token=tok.text)
        if tok.text in ("true", "false", "null"):
            self.advance()
            return JNode("Literal", token=tok.text)
        if tok.text == "this":
            self.advance()
            node = JNode("This")
            node.leaf("this")
            if self.at("("):
                call = JNode("ExplicitConstructorInvocation").add(node)
                call.add(self.arguments())
                return call
            return node
        if tok.text == "super":
            self.advance()
            node = JNode("SuperMemberReference")
            node.leaf("super")
            if self.at("("):
                call = JNode("ExplicitConstructorInvocation").add(node)
                call.add(self.arguments())
                return call
            return node
        if tok.text == "new":
            self.advance()
            return self.creator_rest()
        if tok.text in PRIMITIVES:
            typ = self.parse_type()
            self.expect(".")
            self.expect("class")
            return JNode("ClassReference").add(typ)
        if tok.text == "(":
            lam = self._try(self._paren_lambda)
            if lam is not None:
                return lam
            self.advance()
            inner = self.expression()
            self.expect(")")
            return JNode("ParenthesizedExpression").add(inner)
        if tok.kind == "ident":
            if self.toks[self.pos + 1].text == "->":
                node = JNode("LambdaExpression")
                node.leaf(self.ident())
                self.advance()
                node.add(self.lambda_body())
                return node
            name = self.ident()
            if self.at("("):
                call = JNode("MethodInvocation")
                call.leaf(name)
                call.add(self.arguments())
                return call
            node = JNode("MemberReference")
            node.leaf(name)
            return node
        self.error(f"unexpected token {tok.text!r}")

    def _paren_lambda(self) -> JNode:
        self.expect("(")
        node = JNode("LambdaExpression")
        params = JNode("FormalParameters")
        while not self.at(")"):
            if self.tok.kind != "ident":
                typed = JNode("FormalParameter").add(*self.modifiers())
                typed.add(self.parse_type())
                typed.leaf(self.ident())
                params.add(typed)
            else:
                # could be a bare name or the start of a typed parameter
                if self.toks[self.pos + 1].kind == "ident" or \
                        self.toks[self.pos + 1].text in ("<", "[", "."):
                    typed = JNode("FormalParameter")
                    typed.add(self.parse_type())
                    typed.leaf(self.ident())
                    params.add(typed)
                else:
                    param = JNode("FormalParameter")
                    param.leaf(self.ident())
                    params.add(param)
            if self.at(","):
                self.advance()
        self.expect(")")
        if not self.at("->"):
            self.error("not a lambda")
        self.advance()
        node.add(params)
        node.add(self.lambda_body())
        return node

    def lambda_body(self) -> JNode:
        if self.at("{"):
            return self.block()
        return self.expression()

    def creator_rest(self) -> JNode:
        typ = self.parse_type()
        if self.at("["):
            node = JNode("ArrayCreator").add(typ)
            saw_dim_expr = False
            while self.at("["):
                self.advance()
                if not self.at("]"):
                    node.add(self.expression())
                    saw_dim_expr = True
                self.expect("]")
            if self.at("{"):
                node.add(self.array_initializer())
            elif not saw_dim_expr:
                self.error("array creator needs dimensions or initializer")
            return node
        node = JNode("ClassCreator").add(typ)
        node.add(self.arguments())
        if self.at("{"):
            body = JNode("ClassDeclaration")
            self.class_body(body)
            node.add(body)
        return node


def parse_java(text: str, source_id: str = "") -> Ast:
    """Parse a compilation unit, a bare member, or bare statements."""
    toks = tokenize_java(text)
    if len(toks) <= 1:
        raise ParseError("empty program text", source_id=source_id)
    errors: list[ParseError] = []
    for entry in ("compilation_unit", "member_snippet", "statement_snippet"):
        parser = _Parser(toks)
        try:
            node = getattr(parser, entry)()
            if parser.tok.kind != "eof":
                parser.error(f"trailing input {parser.tok.text!r}")
            return _flatten(node, source_id)
        except ParseError as exc:
            errors.append(exc)
    best = max(errors, key=lambda e: (e.line or 0, e.column or 0))
    raise ParseError(str(best), line=best.line, column=best.column,
                     source_id=source_id)
