#pragma once
// Tokenization and token bags shared by retrieval, profiling and features.
// Tokens are lowercase ASCII alphanumeric runs; there is no stemming.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pxplore {

using TokenList = std::vector<std::string>;
using TokenSet = std::set<std::string>;
// Token -> non-negative weight. Ordered so iteration is deterministic.
using TokenBag = std::map<std::string, double>;

TokenList tokenize(std::string_view text);

TokenBag bag_of(const TokenList& tokens);
TokenSet set_of(const TokenList& tokens);

std::uint64_t fnv1a64(std::string_view s);

// |a ∩ b| / |a ∪ b|; 0 when both are empty.
double jaccard(const TokenSet& a, const TokenSet& b);

}  // namespace pxplore
