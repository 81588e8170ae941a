#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hilim/diagram.hpp"
#include "hilim/oracle.hpp"

using namespace hilim;

namespace {

DenseMatrix<Rational> mat(Index rows, Index cols, std::initializer_list<long long> entries) {
    DenseMatrix<Rational> m = zero_matrix<Rational>(rows, cols);
    auto it = entries.begin();
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = Rational(*it++);
    return m;
}

// Constant rank-1 functor on a given poset.
ModuleDiagram<Rational> constant_q(const Poset& p) {
    ModuleDiagram<Rational> f;
    f.poset = p;
    f.field = FieldSpec::rationals();
    f.dim.assign(static_cast<std::size_t>(p.size()), 1);
    for (std::size_t ci = 0; ci < p.covers().size(); ++ci)
        f.restriction.push_back(identity_matrix<Rational>(1));
    return f;
}

Poset circle() {
    return Poset::build({"v1", "v2", "e1", "e2"},
                        {{"v1", "e1"}, {"v2", "e1"}, {"v1", "e2"}, {"v2", "e2"}});
}

Poset diamond() {
    return Poset::build({"0", "a", "b", "1"},
                        {{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}});
}

// The 3-chain 0 < 1 < 2 with all values Q and zero restrictions.
ModuleDiagram<Rational> chain3_zero() {
    ModuleDiagram<Rational> f;
    f.poset = Poset::build({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    f.field = FieldSpec::rationals();
    f.dim = {1, 1, 1};
    f.restriction = {mat(1, 1, {0}), mat(1, 1, {0})};
    return f;
}

} // namespace

TEST_CASE("validate_functor on the diamond") {
    ModuleDiagram<Rational> f = constant_q(diamond());
    CHECK_NOTHROW(validate_functor<Rational>(f));
    // Break one side of the square: composites [[1]] vs [[2]].
    for (std::size_t ci = 0; ci < f.poset.covers().size(); ++ci)
        if (f.poset.name(f.poset.covers()[ci].lower) == "b") f.restriction[ci] = mat(1, 1, {2});
    CHECK_THROWS_AS(validate_functor<Rational>(f), InputError);
    try {
        validate_functor<Rational>(f);
    } catch (const InputError& e) {
        CHECK(e.code == InputError::Code::NonCommutingSquare);
    }
}

TEST_CASE("validate_functor accepts the circle (no double factorizations)") {
    CHECK_NOTHROW(validate_functor<Rational>(constant_q(circle())));
    ModuleDiagram<Rational> bad = constant_q(circle());
    bad.restriction[0] = mat(2, 1, {1, 1});
    CHECK_THROWS_AS(validate_functor<Rational>(bad), InputError);
}

TEST_CASE("limit over a discrete pair is the product") {
    Poset p = Poset::build({"v1", "v2"}, {});
    auto lim = limit_over<Rational>(as_complex_diagram<Rational>(constant_q(p)));
    CHECK(lim.limit.dims() == std::vector<Index>{2});
}

TEST_CASE("limit over the empty poset is the zero complex") {
    ModuleDiagram<Rational> f;
    f.poset = Poset::build({}, {});
    f.field = FieldSpec::rationals();
    auto lim = limit_over<Rational>(as_complex_diagram<Rational>(f));
    CHECK(lim.limit.is_zero());
}

TEST_CASE("limit over the 2-chain with a cocylinder upstairs") {
    // RF(0) = Q in degree 0, RF(1) = cocyl(0: Q -> Q), restriction = pi.
    CochainComplex<Rational> rf0 = CochainComplex<Rational>::concentrated(1);
    auto fact = mapping_cocylinder<Rational>(
        ChainMap<Rational>::zero(rf0, CochainComplex<Rational>::concentrated(1)));
    CHECK(fact.cocyl.dims() == std::vector<Index>{2, 1});

    ComplexDiagram<Rational> d;
    d.poset = Poset::build({"0", "1"}, {{"0", "1"}});
    d.field = FieldSpec::rationals();
    d.value = {rf0, fact.cocyl};
    d.restriction = {ChainMap<Rational>(fact.cocyl, rf0, {fact.pi.component(0)})};

    auto lim = limit_over<Rational>(d);
    CHECK(lim.limit.dims() == std::vector<Index>{2, 1});
    CHECK(cohomology_dims<Rational>(lim.limit) == std::vector<Index>{1});
    // Projections commute with the restriction.
    CHECK(chain_maps_equal<Rational>(compose<Rational>(d.restriction[0], lim.projections[1]),
                                     lim.projections[0]));
}

TEST_CASE("dim_lim") {
    CHECK(dim_lim<Rational>(constant_q(diamond())) == 1);
    CHECK(dim_lim<Rational>(constant_q(circle())) == 1);
    CHECK(dim_lim<Rational>(chain3_zero()) == 1);   // lim = F(2)
}

TEST_CASE("local fibrancy") {
    ModuleDiagram<Rational> f = constant_q(diamond());
    for (int p = 0; p < f.poset.size(); ++p) CHECK(is_locally_fibrant<Rational>(f, p));

    ModuleDiagram<Rational> c = constant_q(circle());
    CHECK(is_locally_fibrant<Rational>(c, "v1"));   // minimal elements always pass
    CHECK_FALSE(is_locally_fibrant<Rational>(c, "e1"));
    CHECK_THROWS_AS(is_locally_fibrant<Rational>(c, "nope"), InputError);
}

TEST_CASE("fibrant replacement of a constant functor with an initial object") {
    ModuleDiagram<Rational> f = constant_q(diamond());
    auto r = fibrant_replacement<Rational>(f);
    for (int p = 0; p < f.poset.size(); ++p) {
        CHECK(r.cases[static_cast<std::size_t>(p)] == ReplacementCase::Trivial);
        CHECK(r.rf.value[static_cast<std::size_t>(p)].dims() == std::vector<Index>{1});
    }
    CHECK(higher_limits<Rational>(r) == std::vector<Index>{1});
}

TEST_CASE("fibrant replacement on the circle") {
    ModuleDiagram<Rational> f = constant_q(circle());
    auto r = fibrant_replacement<Rational>(f);
    const Poset& p = f.poset;
    CHECK(r.cases[static_cast<std::size_t>(p.index_of("v1"))] == ReplacementCase::Trivial);
    CHECK(r.cases[static_cast<std::size_t>(p.index_of("e1"))] == ReplacementCase::Cocylinder);
    CHECK(r.rf.value[static_cast<std::size_t>(p.index_of("v2"))].dims() == std::vector<Index>{1});
    CHECK(r.rf.value[static_cast<std::size_t>(p.index_of("e1"))].dims() ==
          std::vector<Index>{3, 2});
    CHECK(r.rf.value[static_cast<std::size_t>(p.index_of("e2"))].dims() ==
          std::vector<Index>{3, 2});

    // eps at e1 is the diagonal into the product over the discrete pair.
    const ChainMap<Rational>& eps = r.epsilon[static_cast<std::size_t>(p.index_of("e1"))];
    CHECK(matrix_equal<Rational>(eps.component(0), mat(2, 1, {1, 1})));
    CHECK_FALSE(eps.is_degreewise_epi());

    CHECK(higher_limits<Rational>(r) == std::vector<Index>{1, 1});
    CHECK(higher_limits<Rational>(r) == oracle_higher_limits<Rational>(f));
}

TEST_CASE("fibrant replacement of the 3-chain with zero restrictions") {
    ModuleDiagram<Rational> f = chain3_zero();
    auto r = fibrant_replacement<Rational>(f);
    CHECK(r.cases[0] == ReplacementCase::Trivial);
    CHECK(r.cases[1] == ReplacementCase::Cocylinder);
    CHECK(r.cases[2] == ReplacementCase::Truncated);
    CHECK(r.rf.value[1].dims() == std::vector<Index>{2, 1});
    CHECK(r.rf.value[2].dims() == std::vector<Index>{3, 2});
    // eps_2 is the zero map into a dims-[2,1] limit.
    CHECK(r.below[2].limit.dims() == std::vector<Index>{2, 1});
    CHECK(matrix_is_zero<Rational>(r.epsilon[2].component(0)));

    CHECK(higher_limits<Rational>(r) == std::vector<Index>{1});
    CHECK(higher_limits<Rational>(r) == oracle_higher_limits<Rational>(f));
    // Strict-down-set variants agree with the oracle too.
    for (int p = 0; p < f.poset.size(); ++p)
        CHECK(higher_limits<Rational>(r, p) == oracle_higher_limits<Rational>(f, p));
}

TEST_CASE("matching map at a minimal element lands in the zero complex") {
    ModuleDiagram<Rational> f = constant_q(circle());
    auto r = fibrant_replacement<Rational>(f);
    int v1 = f.poset.index_of("v1");
    CHECK(r.epsilon[static_cast<std::size_t>(v1)].target().is_zero());
    CHECK(chain_maps_equal<Rational>(matching_map<Rational>(f, r, v1),
                                     r.epsilon[static_cast<std::size_t>(v1)]));
}

TEST_CASE("higher limits over any chain concentrate in degree 0") {
    // Arbitrary matrices are functorial on a chain (no squares to commute).
    ModuleDiagram<Rational> f;
    f.poset = Poset::build({"0", "1", "2"}, {{"0", "1"}, {"1", "2"}});
    f.field = FieldSpec::rationals();
    f.dim = {2, 3, 2};
    f.restriction = {mat(2, 3, {1, 2, 0, 0, 1, 5}), mat(3, 2, {1, 0, 0, 1, 1, 1})};
    validate_functor<Rational>(f);
    CHECK(higher_limits<Rational>(f) == std::vector<Index>{2});
    CHECK(oracle_higher_limits<Rational>(f) == std::vector<Index>{2});
}

TEST_CASE("cutoff gates the truncated case") {
    ModuleDiagram<Rational> f = chain3_zero();
    auto r = fibrant_replacement<Rational>(f, 1);   // degree(2) = 2 > cutoff
    CHECK(r.cases[2] == ReplacementCase::Cocylinder);
    CHECK(r.rf.value[2].dims() == std::vector<Index>{3, 3, 1});
    CHECK(higher_limits<Rational>(r) == std::vector<Index>{1});

    auto r2 = fibrant_replacement<Rational>(f, 2);
    CHECK(r2.cases[2] == ReplacementCase::Truncated);
}

TEST_CASE("random instances: certificates and oracle agreement") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        RandomParams params;
        params.max_elements = 6;
        params.max_dim = 2;
        ModuleDiagram<Rational> f = random_instance<Rational>(seed, params);
        auto r = fibrant_replacement<Rational>(f);
        for (int p = 0; p < f.poset.size(); ++p) {
            CHECK(r.matching[static_cast<std::size_t>(p)].is_degreewise_epi());
            CHECK(is_quasi_iso<Rational>(r.comparison[static_cast<std::size_t>(p)]));
            std::vector<Index> expect;
            if (f.dim_of(p) > 0) expect.push_back(f.dim_of(p));
            CHECK(cohomology_dims<Rational>(r.rf.value[static_cast<std::size_t>(p)]) == expect);
        }
        CHECK(higher_limits<Rational>(r) == oracle_higher_limits<Rational>(f));
    }
}

TEST_CASE("random instances are deterministic in the seed") {
    RandomParams params;
    ModuleDiagram<Rational> a = random_instance<Rational>(5, params);
    ModuleDiagram<Rational> b = random_instance<Rational>(5, params);
    CHECK(a.poset.elements() == b.poset.elements());
    CHECK(a.dim == b.dim);
    for (std::size_t ci = 0; ci < a.restriction.size(); ++ci)
        CHECK(matrix_equal<Rational>(a.restriction[ci], b.restriction[ci]));
}

TEST_CASE("random instance over a prime field") {
    RandomParams params;
    params.field = FieldSpec::prime_field(5);
    ModuleDiagram<Fp> f = random_instance<Fp>(3, params);
    CHECK(higher_limits<Fp>(f) == oracle_higher_limits<Fp>(f));
}

TEST_CASE("zero functor has no higher limits") {
    RandomParams params;
    params.atoms = 0;
    ModuleDiagram<Rational> f = random_instance<Rational>(9, params);
    CHECK(higher_limits<Rational>(f).empty());
}
