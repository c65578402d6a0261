#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "opennet/expr.hpp"
#include "opennet/network.hpp"
#include "opennet/opensys.hpp"
#include "opennet/sampling.hpp"
#include "opennet/spaces.hpp"
#include "network_generators.hpp"

using namespace opennet;
using namespace opennet::spaces;
using namespace opennet::network;
using namespace opennet::opensys;
using expr::Expr;
using expr::parse;
using graph::Graph;
using graph::GraphMap;

namespace {

Submersion makeCell() {
    return Submersion({Space("M", {"m"})}, {Space("U", {"u"})});
}

const std::vector<std::string> kCellVars{"m", "u"};

// Two cells exchanging their states through a plane carrier.
Network makeExchangePair() {
    const Space left("M", {"m"});
    const Space leftIn("U", {"u"});
    const Space right("N", {"n"});
    const Space rightIn("V", {"v"});
    const Submersion first({left}, {leftIn});
    const Submersion second({right}, {rightIn});
    const Submersion plane({Space("P1", {"p"}), Space("P2", {"q"})}, {});
    const std::vector<std::string> planeVars{"p", "q"};
    const SubmersionMap wiring(plane, productSubmersion({first, second}),
                               {parse("p", planeVars), parse("q", planeVars),
                                parse("q", planeVars), parse("p", planeVars)},
                               {parse("p", planeVars), parse("q", planeVars)});
    return Network({first, second}, Interconnection(wiring));
}

}  // namespace

TEST_CASE("networks check the wiring against the node product") {
    const Submersion cell = makeCell();
    const Submersion line({Space("L", {"x"})}, {});
    const auto x = Expr::variable("x");
    const SubmersionMap selfFeed(line, productSubmersion({cell}), {x, x}, {x});
    CHECK_NOTHROW(Network({cell}, Interconnection(selfFeed)));
    // wiring targets the product of one cell, but two nodes are declared
    CHECK_THROWS_AS(Network({cell, cell}, Interconnection(selfFeed)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Network({}, Interconnection(selfFeed)), std::invalid_argument);
}

TEST_CASE("composition wires states into inputs") {
    const Network net = makeExchangePair();
    const OpenSystem follow(net.nodes()[0], {parse("u", kCellVars)});
    const OpenSystem track(net.nodes()[1], {parse("v", {"n", "v"})});
    const OpenSystem composed = compose(net, {follow, track});
    CHECK(composed.on() == net.carrier());
    CHECK(composed.isClosed());
    // each cell's velocity is the other's state
    CHECK(composed.evalField(std::vector<double>{2.0, 5.0}) ==
          std::vector<double>{5.0, 2.0});

    // systems must sit on the right nodes, in order
    CHECK_THROWS_AS(compose(net, {track, follow}), std::invalid_argument);
    CHECK_THROWS_AS(compose(net, {follow}), std::invalid_argument);
}

TEST_CASE("a three-cell chain with shared inputs composes to the closed form") {
    const Submersion cell = makeCell();
    const Submersion volume(
        {Space("C1", {"x1"}), Space("C2", {"x2"}), Space("C3", {"x3"})}, {});
    const std::vector<std::string> vol{"x1", "x2", "x3"};
    const SubmersionMap wiring(
        volume, productSubmersion({cell, cell, cell}),
        {parse("x1", vol), parse("x2", vol), parse("x3", vol), parse("sin(x2)", vol),
         parse("sin(x1)", vol), parse("sin(x2)", vol)},
        {parse("x1", vol), parse("x2", vol), parse("x3", vol)});
    const Network net({cell, cell, cell}, Interconnection(wiring));
    const OpenSystem first(cell, {parse("u - m", kCellVars)});
    const OpenSystem second(cell, {parse("m * u", kCellVars)});
    const OpenSystem third(cell, {parse("sin(m) + u", kCellVars)});
    const OpenSystem composed = compose(net, {first, second, third});

    SampleRng rng(2024);
    for (int i = 0; i < 25; ++i) {
        const auto p = rng.boxPoint(3, -2.0, 2.0);
        const auto field = composed.evalField(p);
        REQUIRE(field.size() == 3);
        CHECK(std::abs(field[0] - (std::sin(p[1]) - p[0])) <= 1e-12);
        CHECK(std::abs(field[1] - p[1] * std::sin(p[0])) <= 1e-12);
        CHECK(std::abs(field[2] - (std::sin(p[2]) + std::sin(p[1]))) <= 1e-12);
    }
}

TEST_CASE("a single node wired identically composes to itself") {
    const Submersion line({Space("L", {"x"})}, {});
    const OpenSystem cubic(line, {parse("x^3", {"x"})});
    const auto x = Expr::variable("x");
    const SubmersionMap wiring(line, productSubmersion({line}), {x}, {x});
    const Network net({line}, Interconnection(wiring));
    const OpenSystem composed = compose(net, {cubic});
    for (double v : {-1.5, 0.0, 2.0}) {
        CHECK(composed.evalField(std::vector<double>{v}) ==
              std::vector<double>{v * v * v});
    }
}

TEST_CASE("graph-derived networks route states along in-edges") {
    const Graph g(3, {{0, 1}, {1, 0}, {1, 2}});
    const Space m("M", {"m"});
    const ManifoldNetwork mn(g, {m, m, m});
    const Network net = networkFromGraph(mn);

    REQUIRE(net.nodes().size() == 3);
    CHECK(net.nodes()[0].stateCoordinates() == std::vector<std::string>{"m"});
    CHECK(net.nodes()[0].inputCoordinates() == std::vector<std::string>{"e1.m"});
    CHECK(net.nodes()[1].inputCoordinates() == std::vector<std::string>{"e0.m"});
    CHECK(net.nodes()[2].inputCoordinates() == std::vector<std::string>{"e2.m"});
    CHECK(net.carrier().stateCoordinates() ==
          std::vector<std::string>{"n0.m", "n1.m", "n2.m"});
    CHECK(net.carrier().inputDim() == 0);

    // wiring: states pass through; node 0 hears node 1, node 1 hears node 0,
    // node 2 hears node 1
    const auto image = net.wiring().map().applyTotal(
        std::vector<double>{10.0, 20.0, 30.0});
    CHECK(image == std::vector<double>{10.0, 20.0, 30.0, 20.0, 10.0, 20.0});
}

TEST_CASE("an edgeless graph derives the identity wiring") {
    const Graph g(2, {});
    const ManifoldNetwork mn(g, {Space("A", {"a"}), Space("B", {"b"})});
    const Network net = networkFromGraph(mn);
    CHECK(net.nodes()[0].inputDim() == 0);
    CHECK(net.nodes()[1].inputDim() == 0);
    CHECK(net.wiring().map().applyTotal(std::vector<double>{1.0, 2.0}) ==
          std::vector<double>{1.0, 2.0});
}

TEST_CASE("a loop feeds its own state back") {
    const Graph loop(1, {{0, 0}});
    const ManifoldNetwork mn(loop, {Space("M", {"m"})});
    const Network net = networkFromGraph(mn);
    CHECK(net.nodes()[0].inputCoordinates() == std::vector<std::string>{"e0.m"});
    CHECK(net.wiring().map().applyTotal(std::vector<double>{7.0}) ==
          std::vector<double>{7.0, 7.0});
}

TEST_CASE("manifold networks need one phase per vertex") {
    const Graph g(3, {});
    CHECK_THROWS_AS(ManifoldNetwork(g, {Space("M", {"m"}), Space("M", {"m"})}),
                    std::invalid_argument);
}

TEST_CASE("network maps verify the wiring square at construction") {
    // diagonal map from a single self-listening cell into the synchronous
    // triple; breaking the carrier map must be caught
    const Space m("M", {"m"});
    const Space u("U", {"u"});
    const Submersion cell({m}, {u});
    const Submersion axis({Space("D", {"m0"})}, {});
    const Submersion volume(
        {Space("C1", {"m1"}), Space("C2", {"m2"}), Space("C3", {"m3"})}, {});
    const std::vector<std::string> vol{"m1", "m2", "m3"};

    const SubmersionMap singleWiring(axis, productSubmersion({cell}),
                                     {parse("m0", {"m0"}), parse("sin(m0)", {"m0"})},
                                     {parse("m0", {"m0"})});
    const Network single({cell}, Interconnection(singleWiring));

    const SubmersionMap tripleWiring(
        volume, productSubmersion({cell, cell, cell}),
        {parse("m1", vol), parse("m2", vol), parse("m3", vol), parse("sin(m2)", vol),
         parse("sin(m1)", vol), parse("sin(m2)", vol)},
        {parse("m1", vol), parse("m2", vol), parse("m3", vol)});
    const Network triple({cell, cell, cell}, Interconnection(tripleWiring));

    const std::vector<SubmersionMap> components(3, SubmersionMap::identity(cell));
    const SubmersionMap diagonal(axis, volume,
                                 {parse("m0", {"m0"}), parse("m0", {"m0"}),
                                  parse("m0", {"m0"})},
                                 {parse("m0", {"m0"}), parse("m0", {"m0"}),
                                  parse("m0", {"m0"})});
    CHECK_NOTHROW(NetworkMap(single, triple, {0, 0, 0}, components, diagonal));

    const SubmersionMap skewed(axis, volume,
                               {parse("m0", {"m0"}), parse("m0", {"m0"}),
                                parse("2 * m0", {"m0"})},
                               {parse("m0", {"m0"}), parse("m0", {"m0"}),
                                parse("2 * m0", {"m0"})});
    CHECK_THROWS_AS(NetworkMap(single, triple, {0, 0, 0}, components, skewed),
                    std::invalid_argument);
    // index map entries must be valid source-node indices
    CHECK_THROWS_AS(NetworkMap(single, triple, {0, 0, 1}, components, diagonal),
                    std::invalid_argument);
}

TEST_CASE("block maps apply each component to its indexed block") {
    const Submersion lineA({Space("A", {"a"})}, {});
    const Submersion lineB({Space("B", {"b"})}, {});
    const SubmersionMap square(lineA, lineB, {parse("a^2", {"a"})},
                               {parse("a^2", {"a"})});
    const SubmersionMap cube(lineA, lineB, {parse("a^3", {"a"})},
                             {parse("a^3", {"a"})});
    // both target blocks read source block 0
    const SubmersionMap duplicated = blockMap({0, 0}, {square, cube}, {lineA});
    CHECK(duplicated.source() == productSubmersion({lineA}));
    CHECK(duplicated.target() == productSubmersion({lineB, lineB}));
    CHECK(duplicated.applyTotal(std::vector<double>{2.0}) ==
          std::vector<double>{4.0, 8.0});
}

TEST_CASE("fibrations induce maps of graph networks") {
    const Graph triple(3, {{0, 1}, {1, 0}, {1, 2}});
    const Graph loop(1, {{0, 0}});
    const GraphMap collapse{{0, 0, 0}, {0, 0, 0}};
    const Space m("M", {"m"});
    const ManifoldNetwork tripleMn(triple, {m, m, m});
    const ManifoldNetwork loopMn(loop, {m});

    const NetworkMap fold = networkMapFromFibration(collapse, tripleMn, loopMn);
    CHECK(fold.source().nodes().size() == 1);
    CHECK(fold.target().nodes().size() == 3);
    CHECK(fold.indexMap() == std::vector<int>{0, 0, 0});
    CHECK(fold.carrierMap().applyState(std::vector<double>{2.5}) ==
          std::vector<double>{2.5, 2.5, 2.5});
    const auto& component = fold.components()[0];
    CHECK(component.source() == fold.source().nodes()[0]);
    CHECK(component.target() == fold.target().nodes()[0]);
    CHECK(component.applyTotal(std::vector<double>{1.5, -2.0}) ==
          std::vector<double>{1.5, -2.0});
}

TEST_CASE("the identity fibration induces the identity map") {
    const Graph triple(3, {{0, 1}, {1, 0}, {1, 2}});
    const Space m("M", {"m"});
    const ManifoldNetwork mn(triple, {m, m, m});
    const NetworkMap id =
        networkMapFromFibration(GraphMap{{0, 1, 2}, {0, 1, 2}}, mn, mn);
    CHECK(id.indexMap() == std::vector<int>{0, 1, 2});
    CHECK(id.carrierMap().applyState(std::vector<double>{1.0, 2.0, 3.0}) ==
          std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("the two-cycle folds onto the loop") {
    const Graph twoCycle(2, {{0, 1}, {1, 0}});
    const Graph loop(1, {{0, 0}});
    const Space m("M", {"m"});
    const NetworkMap fold = networkMapFromFibration(
        GraphMap{{0, 0}, {0, 0}}, ManifoldNetwork(twoCycle, {m, m}),
        ManifoldNetwork(loop, {m}));
    CHECK(fold.carrierMap().applyState(std::vector<double>{3.0}) ==
          std::vector<double>{3.0, 3.0});
}

TEST_CASE("non-fibrations and phase mismatches are rejected") {
    const Graph single(1, {});
    const Graph loop(1, {{0, 0}});
    const Space m("M", {"m"});
    CHECK_THROWS_AS(
        networkMapFromFibration(GraphMap{{0}, {}}, ManifoldNetwork(single, {m}),
                                ManifoldNetwork(loop, {m})),
        std::invalid_argument);
    // phases must agree along the vertex map
    const Graph twoCycle(2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(
        networkMapFromFibration(GraphMap{{0, 0}, {0, 0}},
                                ManifoldNetwork(twoCycle, {m, Space("P", {"p"})}),
                                ManifoldNetwork(loop, {m})),
        std::invalid_argument);
}

TEST_CASE("the synchronous triple verifies against its single cell") {
    const Space m("M", {"m"});
    const Space u("U", {"u"});
    const Submersion cell({m}, {u});
    const Submersion axis({Space("D", {"m0"})}, {});
    const Submersion volume(
        {Space("C1", {"m1"}), Space("C2", {"m2"}), Space("C3", {"m3"})}, {});
    const std::vector<std::string> vol{"m1", "m2", "m3"};

    const Network single(
        {cell}, Interconnection(SubmersionMap(
                    axis, productSubmersion({cell}),
                    {parse("m0", {"m0"}), parse("sin(m0)", {"m0"})},
                    {parse("m0", {"m0"})})));
    const Network triple(
        {cell, cell, cell},
        Interconnection(SubmersionMap(
            volume, productSubmersion({cell, cell, cell}),
            {parse("m1", vol), parse("m2", vol), parse("m3", vol),
             parse("sin(m2)", vol), parse("sin(m1)", vol), parse("sin(m2)", vol)},
            {parse("m1", vol), parse("m2", vol), parse("m3", vol)})));
    const SubmersionMap diagonal(axis, volume,
                                 {parse("m0", {"m0"}), parse("m0", {"m0"}),
                                  parse("m0", {"m0"})},
                                 {parse("m0", {"m0"}), parse("m0", {"m0"}),
                                  parse("m0", {"m0"})});
    const NetworkMap diag(single, triple, {0, 0, 0},
                          {SubmersionMap::identity(cell),
                           SubmersionMap::identity(cell),
                           SubmersionMap::identity(cell)},
                          diagonal);

    const OpenSystem relax(cell, {parse("u - m", kCellVars)});
    const auto report = verifyNetworkMap(diag, {relax}, {relax, relax, relax});
    CHECK(report.verdict);
    CHECK(report.maxResidual <= 1e-9);

    // a target cell with different dynamics breaks the hypothesis
    const OpenSystem excite(cell, {parse("u + m", kCellVars)});
    CHECK_THROWS_AS(verifyNetworkMap(diag, {relax}, {relax, excite, relax}),
                    HypothesisError);
}

TEST_CASE("a triple with one open input verifies along the parabola embedding") {
    // one abstract cell (x; u, v); the single network feeds x back into u and
    // leaves v open; the pair network exchanges states and leaves v1, v2 open
    const Space state("S", {"x"});
    const Space inU("IU", {"u"});
    const Space inV("IV", {"v"});
    const Submersion cell({state}, {inU, inV});
    const std::vector<std::string> cellVars{"x", "u", "v"};

    const Submersion sourceCarrier({Space("L", {"x"})}, {Space("LV", {"v"})});
    const std::vector<std::string> sourceVars{"x", "v"};
    const Network single(
        {cell}, Interconnection(SubmersionMap(
                    sourceCarrier, productSubmersion({cell}),
                    {parse("x", sourceVars), parse("x", sourceVars),
                     parse("v", sourceVars)},
                    {parse("x", {"x"})})));

    const Submersion targetCarrier({Space("P1", {"x1"}), Space("P2", {"x2"})},
                                   {Space("V1", {"v1"}), Space("V2", {"v2"})});
    const std::vector<std::string> targetVars{"x1", "x2", "v1", "v2"};
    const Network pair(
        {cell, cell},
        Interconnection(SubmersionMap(
            targetCarrier, productSubmersion({cell, cell}),
            {parse("x1", targetVars), parse("x2", targetVars),
             parse("x2", targetVars), parse("v1", targetVars),
             parse("x1", targetVars), parse("v2", targetVars)},
            {parse("x1", {"x1", "x2"}), parse("x2", {"x1", "x2"})})));

    const SubmersionMap liftSquare(cell, cell,
                                   {parse("x^2", cellVars), parse("u", cellVars),
                                    parse("v", cellVars)},
                                   {parse("x^2", {"x"})});
    const SubmersionMap liftLinear(cell, cell,
                                   {parse("x", cellVars), parse("u^2", cellVars),
                                    parse("v", cellVars)},
                                   {parse("x", {"x"})});
    const SubmersionMap graphMap(
        sourceCarrier, targetCarrier,
        {parse("x^2", sourceVars), parse("x", sourceVars), parse("v", sourceVars),
         parse("v", sourceVars)},
        {parse("x^2", {"x"}), parse("x", {"x"})});
    const NetworkMap embed(single, pair, {0, 0}, {liftSquare, liftLinear},
                           graphMap);

    const OpenSystem base(cell, {parse("0.5 * x * (x^2 + u^2 + v)", cellVars)});
    const OpenSystem fast(cell, {parse("x * (x + u^2 + v)", cellVars)});
    const OpenSystem slow(cell, {parse("0.5 * x * (x^2 + u + v)", cellVars)});
    const auto report = verifyNetworkMap(embed, {base}, {fast, slow});
    CHECK(report.verdict);
    CHECK(report.skipped == 0);
    CHECK(report.maxResidual <= 1e-9);
}

TEST_CASE("random identity-component maps verify") {
    SampleRng rng(424242);
    for (int i = 0; i < 10; ++i) {
        const auto instance = generators::randomIdentityInstance(rng);
        const auto report =
            verifyNetworkMap(instance.map, instance.sourceSystems,
                             instance.targetSystems, 100, 1e-8, 7);
        CAPTURE(i);
        CHECK(report.verdict);
    }
}
