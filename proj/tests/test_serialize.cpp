#include <doctest.h>

#include <random>

#include "casetree/parse.hpp"
#include "casetree/serialize.hpp"
#include "generators.hpp"

using namespace casetree;

TEST_SUITE("serialization") {
  TEST_CASE("two-node tree") {
    CausalForest f;
    Node root{{"急性心筋梗塞"}, false, {}, {Node{{"胸痛"}, false, {}, {}}}};
    f.roots.push_back(root);
    CHECK(serialize_forest(f) == "急性心筋梗塞\n  胸痛\n");
  }

  TEST_CASE("history prefix has no following space") {
    Node n{{"アルコール性肝線維症"}, true, {}, {}};
    CHECK(serialize_node_line(n) == "H:アルコール性肝線維症");
  }

  TEST_CASE("canonical operator spelling") {
    Node n;
    n.head = {"DWI高信号"};
    n.modifiers.push_back({RelationType::tested, {"MRI"}, {}});
    n.modifiers.push_back(
        {RelationType::located, {"大脳半球"},
         {{RelationType::featured, {"右"}, {}}}});
    CHECK(serialize_node_line(n) == "MRI = DWI高信号 @ 右 ＊ 大脳半球");
  }

  TEST_CASE("featured chain precedes the head") {
    Node n;
    n.head = {"痰"};
    n.modifiers.push_back({RelationType::featured, {"泡沫状"}, {}});
    n.modifiers.push_back({RelationType::polarity, {"増加"}, {}});
    CHECK(serialize_node_line(n) == "泡沫状 ＊ 痰 / 増加");
  }

  TEST_CASE("tab indent option") {
    CausalForest f;
    f.roots.push_back(Node{{"A"}, false, {}, {Node{{"B"}, false, {}, {}}}});
    SerializeOptions options;
    options.indent_unit = "\t";
    CHECK(serialize_forest(f, options) == "A\n\tB\n");
  }

  TEST_CASE("round-trip is the identity on random forests") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 300; ++i) {
      CausalForest forest = gen::random_forest(rng);
      std::string text = serialize_forest(forest);
      ParseResult reparsed = parse_forest(text);
      REQUIRE_MESSAGE(reparsed.ok(), "failed on:\n" << text);
      CHECK(*reparsed.forest == forest);
    }
  }

  TEST_CASE("parse then serialize is a fixed point") {
    const std::string noisy = "急性心筋梗塞\r\n\n  心エコー =  僧帽弁逆流 \n";
    ParseResult first = parse_forest(noisy);
    REQUIRE(first.ok());
    std::string canonical = serialize_forest(*first.forest);
    ParseResult second = parse_forest(canonical);
    REQUIRE(second.ok());
    CHECK(serialize_forest(*second.forest) == canonical);
    CHECK(*second.forest == *first.forest);
  }
}
