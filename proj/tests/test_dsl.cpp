#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"
#include "koszulkit/dsl.hpp"

#include <random>

using namespace kk;

namespace {

std::vector<Diagnostic> diags_of(const std::string& text) {
    auto r = parse_doc(text);
    CHECK(!r.doc);
    return r.diags;
}

bool has_diag(const std::vector<Diagnostic>& ds, const std::string& kind, const std::string& needle, int line = 0) {
    for (auto& d : ds)
        if (d.kind == kind && d.message.find(needle) != std::string::npos && (line == 0 || d.line == line)) return true;
    return false;
}

const char* kHead = "dga a {\n  vertex 1 -;\n  gen x : 1 -> 1 deg -1;\n  gen y : 1 -> 1 deg 0;\n";

// a random valid document built from the data types, not from text
SpecDoc random_doc(std::mt19937_64& rng) {
    auto pick = [&](int n) { return (int)(rng() % (unsigned)n); };
    SpecDoc doc;
    doc.title = pick(2) ? "random " + std::to_string(pick(1000)) : "";
    doc.field = pick(3) == 0 ? Field::GF(pick(2) ? 2 : 5) : Field::Q();
    Field f = doc.field;
    if (pick(2)) doc.window = DocWindow{-pick(5), pick(4), pick(2) ? std::optional<size_t>(1 + pick(6)) : std::nullopt};
    if (pick(2)) doc.params["n" + std::to_string(pick(3))] = pick(9) - 4;
    int nstruct = 1 + pick(3);
    for (int s = 0; s < nstruct; ++s) {
        Structure st;
        st.name = "s" + std::to_string(s);
        st.kind = (StructKind)pick(3);
        int nv = 1 + pick(2);
        for (int v = 0; v < nv; ++v) {
            st.q.ring.vertices.push_back(std::string(1, char('p' + v)));
            st.q.ring.decoration.push_back(pick(2) ? '+' : '-');
        }
        int ng = 1 + pick(5);
        for (int g = 0; g < ng; ++g) {
            GenSymbol gs{"g" + std::to_string(g), pick(nv), pick(nv), pick(4) - 2, {}};
            if (pick(4) == 0) gs.weight = 1 + pick(3);
            st.q.gens.push_back(gs);
        }
        auto& q = st.q;
        auto rand_elem = [&](int deg, int src, int dst, int shift, size_t len) {
            Element x(f);
            auto ws = enumerate_words(q, deg, len, shift, src, dst, st.kind == StructKind::DGA);
            for (auto& w : ws)
                if (pick(2)) x.add(w, Scalar(f, (long)pick(7) - 3));
            return x;
        };
        if (st.kind == StructKind::DGA) {
            st.rule = pick(2) ? Leibniz::Left : Leibniz::Right;
            for (int g = 0; g < ng; ++g) {
                auto x = rand_elem(q.gens[g].degree + 1, q.gens[g].src, q.gens[g].dst, 0, 3);
                if (!x.is_zero()) st.d[g] = x;
                if (q.gens[g].degree == 0 && q.gens[g].src == q.gens[g].dst && pick(2)) {
                    Scalar c(f, (long)pick(5) - 2);
                    if (!c.is_zero()) st.aug[g] = c;
                }
            }
            if (pick(2)) {
                auto p = rand_elem(pick(3) - 1, -1, -1, 0, 2);
                if (!p.is_zero()) st.probes["p"] = p;
            }
            if (pick(2) && ng >= 2) {
                auto ws = enumerate_words(q, q.gens[0].degree + q.gens[1].degree, 2, 0, -1, -1, false);
                for (auto& w : ws)
                    if (w.len() == 2) {
                        st.rewrites.push_back({w, Element::word(f, Word::idem(word_src(q, w)), -1)});
                        if (word_degree(q, w) != 0 || word_src(q, w) != word_dst(q, w)) st.rewrites.back().rhs = Element(f);
                        break;
                    }
            }
        } else if (st.kind == StructKind::Algebra) {
            for (int a = 0; a < ng; ++a)
                for (int b = 0; b < ng; ++b) {
                    if (q.gens[a].dst != q.gens[b].src || pick(3)) continue;
                    int deg = q.gens[a].degree + q.gens[b].degree;
                    Element x(f);
                    for (int g = 0; g < ng; ++g)
                        if (q.gens[g].degree == deg && q.gens[g].src == q.gens[a].src && q.gens[g].dst == q.gens[b].dst)
                            x.add(Word::letter(g), Scalar(f, (long)pick(5) - 2));
                    if (!x.is_zero()) st.ops[Word{{a, b}, -1}] = x;
                }
        } else {
            for (int g = 0; g < ng; ++g) {
                Element x(f);
                for (auto& w : enumerate_words(q, 0, 3, 0, q.gens[g].src, q.gens[g].dst, false)) {
                    int sum = word_degree(q, w);
                    if (sum == q.gens[g].degree + 2 - (int)w.len() && w != Word::letter(g) && pick(2))
                        x.add(w, Scalar(f, (long)pick(5) - 2));
                }
                // enumerate_words fixes the total degree; collect other lengths too
                for (int deg = -8; deg <= 8; ++deg)
                    for (auto& w : enumerate_words(q, deg, 3, 0, q.gens[g].src, q.gens[g].dst, false))
                        if (deg != 0 && deg == q.gens[g].degree + 2 - (int)w.len() && pick(3) == 0)
                            x.add(w, Scalar(f, (long)pick(5) - 2));
                if (!x.is_zero()) st.delta[g] = x;
            }
        }
        doc.structures.push_back(st);
    }
    return doc;
}

}  // namespace

TEST_CASE("bundled Hopf document matches the hand-typed tables") {
    auto doc = load_example("hopf");
    auto& ce = doc.get("ce");
    CHECK(ce.q.gens.size() == 9);
    CHECK(ce.q.nv() == 2);
    CHECK(ce.q.ring.decoration == std::vector<char>{'+', '-'});
    auto a = to_dga(ce, Field::Q());
    auto ref = fx::hopf_ce();
    for (size_t g = 0; g < ref.q.gens.size(); ++g) {
        CHECK(a.q.gens[g].name == ref.q.gens[g].name);
        CHECK(a.q.gens[g].degree == ref.q.gens[g].degree);
        CHECK_MESSAGE(a.d.images.at((int)g) == ref.d.images.at((int)g), ref.q.gens[g].name);
    }
    auto lc = to_coalgebra(doc.get("lc"), Field::Q());
    auto lref = fx::hopf_lc();
    CHECK(lc.delta == lref.delta);
    auto la = to_algebra(doc.get("la"), Field::Q());
    CHECK(la.ops == fx::hopf_la_printed().ops);
    CHECK(to_algebra(doc.get("cf"), Field::Q()).ops == fx::hopf_cf().ops);

    auto t = doc_twist(doc, 0);
    auto tref = fx::hopf_twist(lref, t.tgt.q);
    for (auto& [g, x] : tref) CHECK(t.value(g) == x);
}

TEST_CASE("circle model and corpus loading") {
    auto doc = load_example("s1_model");
    auto& s = doc.get("s1");
    std::vector<std::string> names;
    for (auto& g : s.q.gens) names.push_back(g.name);
    CHECK(names == std::vector<std::string>{"s1", "t1", "k1", "l1", "u1"});
    auto& q = s.q;
    CHECK(s.d.at(q.gen("k1")) == fx::E(0) - fx::W(q, {"s1", "t1"}));
    CHECK_THROWS_AS(load_example("bogus"), std::out_of_range);
    CHECK(example_ids().size() == 12);
}

TEST_CASE("positioned diagnostics") {
    auto ds = diags_of("dga a {\n  vertex 1 -;\n  gen c1 : 1 -> 1 deg -1;\n  gen s1 : 1 -> 1 deg 0;\n  gen c12 : 1 -> 1 deg 0;\n"
                       "  d c1 = s1 + c12*c21;\n}\n");
    REQUIRE(!ds.empty());
    CHECK(has_diag(ds, "semantic", "unknown generator 'c21'", 6));
    CHECK(ds[0].col == 19);

    ds = diags_of(std::string(kHead) + "  d x = x;\n}\n");
    CHECK(has_diag(ds, "semantic", "degree", 5));

    ds = diags_of(std::string(kHead) + "  d x = y y +;\n}\n");
    CHECK(has_diag(ds, "syntax", "", 5));

    ds = diags_of("dga a { vertex 1 -; gen x : 1 -> 1 deg 0 $ }");
    CHECK(has_diag(ds, "lexical", "", 1));

    // products that do not compose are rejected rather than silently dropped
    ds = diags_of("dga a { vertex 1 -; vertex 2 -; gen x : 1 -> 2 deg 0; gen c : 1 -> 1 deg -1; d c = x x; }");
    CHECK(has_diag(ds, "semantic", "compos"));

    // several errors are all reported
    ds = diags_of(std::string(kHead) + "  d x = z;\n  d y = w;\n}\n");
    CHECK(has_diag(ds, "semantic", "'z'", 5));
    CHECK(has_diag(ds, "semantic", "'w'", 6));
}

TEST_CASE("grammar details") {
    auto doc = parse(std::string(kHead) + "  d x = 2*y^2 - (y + 1) y + 3/3;\n}\n");
    auto& s = doc.get("a");
    auto& q = s.q;
    CHECK(s.d.at(q.gen("x")) == fx::W(q, {"y", "y"}) - fx::W(q, {"y"}) + fx::E(0));

    auto gf = parse("field gf3;\n" + std::string(kHead) + "  d x = 4 y + 5;\n}\n");
    auto& t = gf.get("a");
    Field f3 = Field::GF(3);
    CHECK(t.d.at(0) == fx::W(t.q, {"y"}, 1, f3) + fx::E(0, 2, f3));

    auto sp = load_example("spheres_plus", {{"m", 2}, {"k", 1}});
    auto& ce = sp.get("ce");
    CHECK(ce.q.gens[ce.q.gen("s1")].degree == 0);
    // (-1)^{km} = +1 and (-1)^{k(m-1)} = -1
    CHECK(ce.d.at(ce.q.gen("y")) == fx::W(ce.q, {"s1", "s2"}) - fx::W(ce.q, {"s2", "s1"}));
    CHECK(ce.d.at(ce.q.gen("a")) ==
          fx::W(ce.q, {"y"}) - fx::W(ce.q, {"b", "s1"}) - fx::W(ce.q, {"s1", "b"}));
    CHECK(!parse_doc(example_text("spheres_plus"), {{"nope", 1}}).doc);
}

TEST_CASE("serializer output") {
    SpecDoc empty;
    auto txt = serialize(empty);
    CHECK(same_structure(parse(txt), empty));
    CHECK(txt.size() < 40);

    auto doc = parse(std::string(kHead) + "  d x = y y + 1 - y;\n}\n");
    auto out = serialize(doc);
    // shorter words first, idempotent before letters
    CHECK(out.find("d x = e(1) - y + y*y;") != std::string::npos);
}

TEST_CASE("round trip of the corpus") {
    for (auto& id : example_ids()) {
        auto doc = load_example(id);
        auto again = parse(serialize(doc));
        std::string why;
        CHECK_MESSAGE(same_structure(doc, again, &why), (id + ": " + why));
        CHECK(serialize(again) == serialize(doc));
        CHECK(!doc_json(doc).empty());
    }
}

TEST_CASE("round trip of random documents") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 200; ++it) {
        auto doc = random_doc(rng);
        auto text = serialize(doc);
        auto r = parse_doc(text);
        std::string first = r.diags.empty() ? "" : r.diags[0].str();
        REQUIRE_MESSAGE(r.doc, (text + "\n" + first));
        std::string why;
        CHECK_MESSAGE(same_structure(doc, *r.doc, &why), (text + "\n" + why));
    }
}

TEST_CASE("parser survives arbitrary bytes") {
    std::mt19937_64 rng(99);
    auto corpus = example_text("hopf");
    const std::string alphabet = "dgavertx{};:()->+*^,.=e01239 \n#\"";
    for (int it = 0; it < 1500; ++it) {
        std::string s;
        int mode = (int)(rng() % 3);
        if (mode == 0) {
            size_t n = rng() % 200;
            for (size_t i = 0; i < n; ++i) s += (char)(rng() % 256);
        } else if (mode == 1) {
            size_t n = rng() % 300;
            for (size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
        } else {
            // mutate the Hopf document
            s = corpus;
            for (int k = 0; k < 5; ++k) {
                size_t pos = rng() % s.size();
                switch (rng() % 3) {
                    case 0: s.erase(pos, 1 + rng() % 8); break;
                    case 1: s.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
                    default: s[pos] = (char)(rng() % 256);
                }
            }
        }
        auto r = parse_doc(s);
        CHECK((r.doc.has_value() == r.diags.empty()));
        for (auto& d : r.diags) {
            CHECK(d.line >= 1);
            CHECK(d.col >= 1);
        }
    }
    // deep nesting is a diagnostic, not a stack overflow
    std::string deep = std::string(kHead) + "  d x = " + std::string(5000, '(') + "y" + std::string(5000, ')') + ";\n}\n";
    CHECK(!parse_doc(deep).doc);
}
