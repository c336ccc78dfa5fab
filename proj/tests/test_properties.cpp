#include <doctest.h>

#include "properties.hpp"

TEST_CASE("multilinearity") { CHECK(props::multilinearity(1) == 0); }
TEST_CASE("det is alternating") { CHECK(props::alternating_det(2) == 0); }
TEST_CASE("gradient pairing") { CHECK(props::gradient_pairing(3) == 0); }
TEST_CASE("bias methods agree on all bilinear forms over F_2^2") { CHECK(props::bias_methods_agree() == 0); }
TEST_CASE("reduction traces verify") { CHECK(props::reduction_traces() == 0); }
TEST_CASE("minor independence") { CHECK(props::minor_independence() == 0); }
TEST_CASE("serialization round trips") { CHECK(props::round_trips(4) == 0); }
