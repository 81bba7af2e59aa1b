#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "argen/errors.hpp"

namespace argen {

enum class Pos { Noun, Verb, Adj, Other };

std::string pos_name(Pos p);
Pos pos_from_name(const std::string& s);

// Lowercased tokens plus an optional coarse POS layer of equal length.
struct TokenSeq {
    std::vector<std::string> tokens;
    std::vector<Pos> pos;  // empty or same length as tokens

    bool has_pos() const { return !pos.empty(); }
    size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    std::string joined() const;
};

// Tokenization rules:
//   - ASCII letters are lowercased; tokens are split on whitespace;
//   - '.', '-' and '\'' stay inside a token only when both neighbours are
//     alphanumeric ("e-mails", "u.s", "don't");
//   - every other punctuation character becomes its own token.
TokenSeq tokenize(const std::string& text);

// Splits a token sequence into sentences at '.', '!', '?' tokens (the
// terminator stays with its sentence). POS tags, when present, are carried.
std::vector<TokenSeq> split_sentences(const TokenSeq& seq);

using WordSet = std::unordered_set<std::string>;

// Loads a one-token-per-line list; '#' starts a comment, blanks ignored.
WordSet load_word_list(const std::string& path);

// Tokens made only of ASCII letters and not in the stopword set.
WordSet content_words(const TokenSeq& seq, const WordSet& stopwords);
bool is_alpha_token(const std::string& tok);

// Reserved vocabulary entries, in fixed id order 0..6.
enum ReservedToken : int {
    kPad = 0,
    kUnk = 1,
    kBos = 2,
    kEos = 3,
    kEvd = 4,
    kArg = 5,
    kPhrase = 6,
};
inline constexpr int kNumReserved = 7;
const std::vector<std::string>& reserved_tokens();

class Vocabulary {
public:
    Vocabulary();

    // Fills non-reserved slots by descending frequency, ties broken
    // lexicographically, up to `cap` total entries (cap must exceed the
    // reserved count).
    static Vocabulary build(const std::vector<const TokenSeq*>& corpus, int cap);

    int encode_token(const std::string& tok) const;  // unknown -> kUnk
    std::vector<int> encode(const std::vector<std::string>& toks) const;
    const std::string& decode(int id) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;
    bool contains(const std::string& tok) const { return token_to_id_.count(tok) > 0; }
    int size() const { return static_cast<int>(id_to_token_.size()); }

    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

    void add_token(const std::string& tok);  // appends if absent

private:
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::string> id_to_token_;
};

enum class PhraseKind { NP, VP };

// Half-open token span [start, end) into some TokenSeq.
struct Phrase {
    int start = 0;
    int end = 0;
    PhraseKind kind = PhraseKind::NP;
    int sentence_index = 0;  // source order for multi-sentence extraction

    int length() const { return end - start; }
    bool overlaps(const Phrase& o) const {
        return sentence_index == o.sentence_index && start < o.end && o.start < end;
    }
};

std::vector<std::string> phrase_tokens(const Phrase& p, const TokenSeq& seq);

// Closed-class lexicon tagger: exact lexicon matches first, then suffix
// heuristics, then NOUN. The lexicon file also marks determiners, which keep
// POS Other but feed the chunker.
class PosTagger {
public:
    static PosTagger load(const std::string& lexicon_path);
    static PosTagger builtin_minimal();  // tiny fallback used by tests

    std::vector<Pos> tag(const std::vector<std::string>& tokens) const;
    TokenSeq tag_seq(TokenSeq seq) const;
    bool is_determiner(const std::string& tok) const { return determiners_.count(tok) > 0; }

private:
    std::unordered_map<std::string, Pos> lexicon_;
    WordSet determiners_;
    Pos suffix_guess(const std::string& tok) const;
};

// NP: maximal NOUN run, extended left over contiguous ADJ tokens and at most
// one determiner. VP: a VERB token immediately followed by an NP. Requires a
// POS layer on the input.
std::vector<Phrase> chunk_phrases(const TokenSeq& seq, const PosTagger& tagger,
                                  int sentence_index = 0);

}  // namespace argen
