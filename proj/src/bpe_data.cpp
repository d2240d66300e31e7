// SPDX-License-Identifier: Apache-2.0
// Generated merge table for the built-in byte-pair token counter.
// Regenerate with a retrained table only together with the stored index files;
// token counts are part of the persisted chunk format.

#include "spdrag/tokenizer.hpp"

namespace spdrag {

const std::vector<BpePair>& builtin_bpe_merges() {
    static const std::vector<BpePair> table = {
        {" ", "a"},
        {" ", "t"},
        {"e", "r"},
        {" ", "s"},
        {"r", "e"},
        {"i", "n"},
        {"e", "n"},
        {" ", "w"},
        {" ", "f"},
        {" ", "c"},
        {" ", "b"},
        {" ", "m"},
        {"n", "d"},
        {"h", "e"},
        {"o", "r"},
        {"a", "r"},
        {"a", "t"},
        {" ", "p"},
        {" ", "d"},
        {" ", "l"},
        {"o", "u"},
        {" ", "e"},
        {"e", "d"},
        {"o", "n"},
        {"s", "t"},
        {"e", "t"},
        {"i", "t"},
        {"l", "l"},
        {" ", "n"},
        {"o", "m"},
        {"a", "n"},
        {"e", "s"},
        {" ", "h"},
        {" a", "nd"},
        {"c", "h"},
        {" ", "re"},
        {" t", "he"},
        {" t", "o"},
        {"a", "s"},
        {"o", "w"},
        {" ", "in"},
        {" t", "h"},
        {"c", "t"},
        {"i", "s"},
        {"v", "er"},
        {"en", "t"},
        {" ", "g"},
        {" s", "t"},
        {"c", "e"},
        {"i", "g"},
        {"i", "l"},
        {" ", "o"},
        {"a", "l"},
        {"s", "e"},
        {" ", "r"},
        {" ", "u"},
        {" s", "e"},
        {" w", "h"},
        {"d", "e"},
        {"s", ","},
        {"u", "m"},
        {" n", "e"},
        {"a", "in"},
        {"g", "e"},
        {"h", "er"},
        {"i", "on"},
        {"o", "c"},
        {"o", "re"},
        {"or", "t"},
        {"v", "e"},
        {" ", "2"},
        {" ", "is"},
        {" a", "n"},
        {" b", "e"},
        {" c", "a"},
        {" l", "i"},
        {" w", "or"},
        {"a", "ch"},
        {"a", "nd"},
        {"a", "y"},
        {"er", "s"},
        {"i", "c"},
        {"in", "g"},
        {"it", "h"},
        {"l", "d"},
        {"o", "o"},
        {"o", "s"},
        {"s", "."},
        {"u", "n"},
        {"u", "re"},
        {" ", "1"},
        {" ", "on"},
        {" b", "y"},
        {" f", "r"},
        {" re", "p"},
        {" w", "ith"},
        {"a", "d"},
        {"h", "t"},
        {"i", "d"},
        {"i", "m"},
        {"i", "r"},
        {"k", "e"},
        {"l", "e"},
        {"n", "t"},
        {"ou", "nd"},
        {" ", "q"},
        {" a", "g"},
        {" a", "re"},
        {" c", "h"},
        {" c", "om"},
        {" c", "o"},
        {" d", "oc"},
        {" doc", "um"},
        {" docum", "ent"},
        {" e", "ach"},
        {" e", "v"},
        {" f", "in"},
        {" fr", "om"},
        {" in", "t"},
        {" int", "o"},
        {" m", "o"},
        {" o", "f"},
        {" p", "r"},
        {" q", "u"},
        {" rep", "ort"},
        {" s", "c"},
        {" s", "h"},
        {" th", "at"},
        {" wor", "k"},
        {"T", "he"},
        {"a", "ce"},
        {"ar", "t"},
        {"at", "e"},
        {"e", "ar"},
        {"e", "ll"},
        {"es", ","},
        {"ig", "ht"},
        {"il", "e"},
        {"in", "e"},
        {"k", "en"},
        {"ow", "n"},
        {"s", "w"},
        {"u", "t"},
        {"ver", "y"},
        {" ", "A"},
        {" ", "C"},
        {" ", "E"},
        {" ", "he"},
        {" ", "it"},
        {" ", "y"},
        {" 1", "0"},
        {" 2", "0"},
        {" 20", "2"},
        {" a", "ll"},
        {" a", "l"},
        {" ag", "ain"},
        {" an", "sw"},
        {" ca", "ll"},
        {" e", "very"},
        {" e", "x"},
        {" f", "or"},
        {" g", "o"},
        {" g", "r"},
        {" m", "u"},
        {" n", "o"},
        {" p", "a"},
        {" p", "er"},
        {" p", "l"},
        {" r", "un"},
        {" s", "a"},
        {" s", "o"},
        {" sc", "ore"},
        {" t", "r"},
        {" to", "g"},
        {" to", "ken"},
        {" to", "o"},
        {" tog", "et"},
        {" toget", "her"},
        {" u", "s"},
        {"ad", "s"},
        {"as", "e"},
        {"as", "k"},
        {"ct", "ion"},
        {"en", "ce"},
        {"en", "d"},
        {"er", "e"},
        {"et", "w"},
        {"l", "a"},
        {"m", "e"},
        {"oo", "d"},
        {"ou", "ld"},
        {"ou", "r"},
        {"p", "p"},
        {"t", "her"},
        {" ", "7"},
        {" ", "The"},
        {" ", "i"},
        {" ", "k"},
        {" 10", "0"},
        {" 2", "5"},
        {" E", "ach"},
        {" a", "pp"},
        {" a", "s"},
        {" again", "st"},
        {" answ", "er"},
        {" b", "ase"},
        {" b", "at"},
        {" b", "etw"},
        {" b", "ound"},
        {" b", "o"},
        {" be", "f"},
        {" bef", "ore"},
        {" betw", "e"},
        {" betwe", "en"},
        {" c", "an"},
        {" c", "ar"},
        {" c", "r"},
        {" ch", "un"},
        {" chun", "k"},
        {" com", "e"},
        {" cr", "os"},
        {" cros", "s"},
        {" d", "at"},
        {" d", "e"},
        {" d", "i"},
        {" d", "own"},
        {" d", "o"},
        {" dat", "as"},
        {" datas", "et"},
        {" ev", "al"},
        {" f", "ar"},
        {" f", "e"},
        {" f", "ile"},
        {" f", "ir"},
        {" f", "is"},
        {" fin", "d"},
        {" fir", "st"},
        {" gr", "ou"},
        {" grou", "p"},
        {" h", "ar"},
        {" h", "a"},
        {" h", "ow"},
        {" ha", "ve"},
        {" in", "de"},
        {" in", "st"},
        {" inde", "x"},
        {" inst", "an"},
        {" it", "s"},
        {" l", "ine"},
        {" l", "o"},
        {" li", "ke"},
        {" lo", "ads"},
        {" m", "an"},
        {" m", "ar"},
        {" m", "a"},
        {" m", "et"},
        {" m", "e"},
        {" mo", "de"},
        {" mode", "l"},
        {" ne", "ed"},
        {" ne", "ver"},
        {" o", "ver"},
        {" p", "re"},
        {" pa", "p"},
        {" pr", "o"},
        {" qu", "er"},
        {" quer", "y"},
        {" report", "s"},
        {" s", "p"},
        {" s", "u"},
        {" s", "y"},
        {" se", "ar"},
        {" se", "e"},
        {" st", "ate"},
        {" t", "ask"},
        {" t", "a"},
        {" t", "ell"},
        {" the", "ir"},
        {" tr", "ace"},
        {" u", "nt"},
        {" unt", "il"},
        {" w", "at"},
        {" wor", "d"},
        {" work", "er"},
        {" y", "ear"},
        {"a", "ge"},
        {"a", "ll"},
        {"an", "t"},
        {"ar", "i"},
        {"at", "ion"},
        {"c", "es"},
        {"c", "he"},
        {"c", "om"},
        {"ct", "or"},
        {"ct", "ure"},
        {"d", "ed"},
        {"d", "i"},
        {"e", "ct"},
        {"e", "x"},
        {"f", "ig"},
        {"f", "t"},
        {"g", "in"},
        {"h", "en"},
        {"i", "ll"},
        {"i", "ve"},
        {"il", "d"},
        {"it", "e"},
        {"it", "y"},
        {"j", "u"},
        {"l", "it"},
        {"l", "t"},
        {"m", "and"},
        {"o", "p"},
        {"o", "se"},
        {"om", "e"},
        {"on", "fig"},
        {"on", "g"},
        {"oo", "k"},
        {"ou", "g"},
        {"ou", "nt"},
        {"ou", "t"},
        {"p", "os"},
        {"r", "a"},
        {"r", "i"},
        {"r", "y"},
        {"re", "e"},
        {"s", "p"},
        {"s", "u"},
        {"st", ","},
        {"u", "r"},
        {"u", "s"},
        {"um", "b"},
        {"um", "m"},
        {"z", "er"},
    };
    return table;
}

}  // namespace spdrag
