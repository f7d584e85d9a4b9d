#pragma once

#include "koszulkit/koszul.hpp"

namespace kk {

struct Diagnostic {
    int line = 0, col = 0;
    std::string kind;  // lexical | syntax | semantic
    std::string message;
    std::string str() const;
};

class dsl_error : public std::runtime_error {
  public:
    explicit dsl_error(std::vector<Diagnostic> d);
    std::vector<Diagnostic> diags;
};

enum class StructKind { DGA, Algebra, Coalgebra };
std::string kind_name(StructKind k);

// one named block of a document
struct Structure {
    std::string name;
    StructKind kind = StructKind::DGA;
    Quiver q;
    Leibniz rule = Leibniz::Left;
    std::map<int, Element> d;      // dga: generator -> d(generator)
    std::map<Word, Element> ops;   // algebra: inputs -> m_k(inputs)
    std::map<int, Element> delta;  // coalgebra: generator -> sum of Delta_i
    std::map<int, Scalar> aug;
    std::vector<RewriteRule> rewrites;
    std::map<std::string, Element> probes;  // named elements, e.g. a primitive-search target
};

// NAME, dual(X) or cobar(X)
struct ObjRef {
    std::string base;
    std::vector<std::string> ops;  // applied innermost first
    std::string str() const;
    bool operator==(const ObjRef&) const = default;
};

// "cobar(dual(cf))" -> {cf, [dual, cobar]}; throws dsl_error on bad syntax
ObjRef parse_objref(const std::string& text);

struct DocTwist {
    std::string source;
    ObjRef target;
    TwistConvention conv = TwistConvention::Printed;
    std::map<int, Element> values;  // source generator -> element of the target
};

struct DocMap {
    std::string name;
    ObjRef src, tgt;
    std::map<int, Element> images;  // absent means 0
};

struct DocWindow {
    int dmin = 0, dmax = 0;
    std::optional<size_t> max_len;
    bool operator==(const DocWindow&) const = default;
};

struct SpecDoc {
    std::string title;
    Field field = Field::Q();
    std::map<std::string, long> params;
    std::optional<DocWindow> window;
    std::vector<Structure> structures;
    std::vector<DocTwist> twists;
    std::vector<DocMap> maps;

    const Structure* find(const std::string& name) const;
    const Structure& get(const std::string& name) const;  // throws
};

struct ParseResult {
    std::optional<SpecDoc> doc;
    std::vector<Diagnostic> diags;
};

// never throws; diagnostics carry line and column
ParseResult parse_doc(const std::string& text, const std::map<std::string, long>& overrides = {});
// throws dsl_error
SpecDoc parse(const std::string& text, const std::map<std::string, long>& overrides = {});
std::string serialize(const SpecDoc& doc);
bool same_structure(const SpecDoc& a, const SpecDoc& b, std::string* why = nullptr);

// resolved objects
FreeDGA to_dga(const Structure& s, Field f);
AInfAlg to_algebra(const Structure& s, Field f);
AInfCoalg to_coalgebra(const Structure& s, Field f);

struct Resolved {
    StructKind kind;
    std::optional<FreeDGA> dga;
    std::optional<AInfAlg> alg;
    std::optional<AInfCoalg> coalg;
    const Quiver& quiver() const;
};
Resolved resolve(const SpecDoc& doc, const ObjRef& r, std::optional<Field> f = std::nullopt);
Twist doc_twist(const SpecDoc& doc, size_t i, std::optional<Field> f = std::nullopt);

// JSON export
std::string doc_json(const SpecDoc& doc);

// bundled corpus
std::vector<std::string> example_ids();
std::string example_text(const std::string& id);  // throws std::out_of_range
SpecDoc load_example(const std::string& id, const std::map<std::string, long>& params = {});

}  // namespace kk
