#include "argen/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace argen {

std::string pos_name(Pos p) {
    switch (p) {
        case Pos::Noun: return "NOUN";
        case Pos::Verb: return "VERB";
        case Pos::Adj: return "ADJ";
        case Pos::Other: return "OTHER";
    }
    return "OTHER";
}

Pos pos_from_name(const std::string& s) {
    if (s == "NOUN") return Pos::Noun;
    if (s == "VERB") return Pos::Verb;
    if (s == "ADJ") return Pos::Adj;
    if (s == "OTHER") return Pos::Other;
    throw DataError("unknown POS tag: " + s);
}

std::string TokenSeq::joined() const {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

static bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }

TokenSeq tokenize(const std::string& text) {
    TokenSeq out;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            out.tokens.push_back(cur);
            cur.clear();
        }
    };
    size_t n = text.size();
    for (size_t i = 0; i < n; ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            flush();
            continue;
        }
        if (is_alnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
            continue;
        }
        bool joiner = (c == '.' || c == '-' || c == '\'');
        if (joiner && !cur.empty() && i + 1 < n && is_alnum(static_cast<unsigned char>(text[i + 1]))) {
            cur.push_back(static_cast<char>(c));
            continue;
        }
        flush();
        out.tokens.push_back(std::string(1, static_cast<char>(c)));
    }
    flush();
    return out;
}

std::vector<TokenSeq> split_sentences(const TokenSeq& seq) {
    std::vector<TokenSeq> out;
    TokenSeq cur;
    for (size_t i = 0; i < seq.tokens.size(); ++i) {
        cur.tokens.push_back(seq.tokens[i]);
        if (seq.has_pos()) cur.pos.push_back(seq.pos[i]);
        const std::string& t = seq.tokens[i];
        if (t == "." || t == "!" || t == "?") {
            out.push_back(std::move(cur));
            cur = TokenSeq{};
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

WordSet load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open word list: " + path);
    WordSet out;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (ls >> tok) out.insert(tok);
    }
    return out;
}

bool is_alpha_token(const std::string& tok) {
    if (tok.empty()) return false;
    for (unsigned char c : tok) {
        if (!std::isalpha(c)) return false;
    }
    return true;
}

WordSet content_words(const TokenSeq& seq, const WordSet& stopwords) {
    WordSet out;
    for (const std::string& t : seq.tokens) {
        if (is_alpha_token(t) && stopwords.count(t) == 0) out.insert(t);
    }
    return out;
}

const std::vector<std::string>& reserved_tokens() {
    static const std::vector<std::string> toks = {"<pad>", "<unk>", "<s>", "</s>",
                                                  "<evd>", "<arg>", "<phrase>"};
    return toks;
}

Vocabulary::Vocabulary() {
    for (const std::string& t : reserved_tokens()) {
        token_to_id_.emplace(t, static_cast<int>(id_to_token_.size()));
        id_to_token_.push_back(t);
    }
}

Vocabulary Vocabulary::build(const std::vector<const TokenSeq*>& corpus, int cap) {
    if (cap <= kNumReserved) {
        throw ConfigError("vocabulary cap must exceed the reserved token count");
    }
    std::unordered_map<std::string, long long> freq;
    for (const TokenSeq* seq : corpus) {
        for (const std::string& t : seq->tokens) ++freq[t];
    }
    std::vector<std::pair<std::string, long long>> items(freq.begin(), freq.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary v;
    for (const auto& [tok, count] : items) {
        (void)count;
        if (v.size() >= cap) break;
        v.add_token(tok);
    }
    return v;
}

void Vocabulary::add_token(const std::string& tok) {
    if (token_to_id_.count(tok)) return;
    token_to_id_.emplace(tok, static_cast<int>(id_to_token_.size()));
    id_to_token_.push_back(tok);
}

int Vocabulary::encode_token(const std::string& tok) const {
    auto it = token_to_id_.find(tok);
    return it == token_to_id_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& toks) const {
    std::vector<int> out;
    out.reserve(toks.size());
    for (const std::string& t : toks) out.push_back(encode_token(t));
    return out;
}

const std::string& Vocabulary::decode(int id) const {
    if (id < 0 || id >= size()) throw DataError("vocabulary id out of range");
    return id_to_token_[static_cast<size_t>(id)];
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(decode(id));
    return out;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write vocabulary file: " + path);
    for (const std::string& t : id_to_token_) out << t << "\n";
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open vocabulary file: " + path);
    Vocabulary v;
    std::string line;
    int idx = 0;
    while (std::getline(in, line)) {
        if (idx < kNumReserved) {
            if (line != reserved_tokens()[static_cast<size_t>(idx)]) {
                throw DataError("vocabulary file missing reserved tokens: " + path);
            }
        } else {
            v.add_token(line);
        }
        ++idx;
    }
    if (idx < kNumReserved) throw DataError("vocabulary file truncated: " + path);
    return v;
}

std::vector<std::string> phrase_tokens(const Phrase& p, const TokenSeq& seq) {
    if (p.start < 0 || p.end > static_cast<int>(seq.size()) || p.start >= p.end) {
        throw DataError("phrase span out of range");
    }
    return std::vector<std::string>(seq.tokens.begin() + p.start, seq.tokens.begin() + p.end);
}

PosTagger PosTagger::load(const std::string& lexicon_path) {
    std::ifstream in(lexicon_path);
    if (!in) throw DataError("cannot open POS lexicon: " + lexicon_path);
    PosTagger t;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tok, tag;
        if (!(ls >> tok >> tag)) continue;
        if (tag == "DET") {
            t.determiners_.insert(tok);
            t.lexicon_[tok] = Pos::Other;
        } else {
            t.lexicon_[tok] = pos_from_name(tag);
        }
    }
    return t;
}

PosTagger PosTagger::builtin_minimal() {
    PosTagger t;
    for (const char* d : {"the", "a", "an", "this", "that", "these", "those", "my",
                          "your", "his", "her", "its", "our", "their"}) {
        t.determiners_.insert(d);
        t.lexicon_[d] = Pos::Other;
    }
    for (const char* w : {"is", "are", "was", "were", "be", "been", "has", "have", "had",
                          "do", "does", "did", "reads", "read", "think", "thinks", "says",
                          "say", "makes", "make", "helps", "help", "supports", "support"}) {
        t.lexicon_[w] = Pos::Verb;
    }
    for (const char* w : {"and", "or", "but", "if", "of", "in", "on", "to", "for", "with",
                          "at", "by", "from", "not", "no", "it", "they", "we", "you", "i"}) {
        t.lexicon_[w] = Pos::Other;
    }
    return t;
}

Pos PosTagger::suffix_guess(const std::string& tok) const {
    if (!is_alpha_token(tok)) return Pos::Other;
    auto ends = [&](const char* suf) {
        size_t n = std::strlen(suf);
        return tok.size() > n && tok.compare(tok.size() - n, n, suf) == 0;
    };
    if (ends("ing") || ends("ize") || ends("ise") || ends("ify")) return Pos::Verb;
    if (ends("ly")) return Pos::Other;
    if (ends("ous") || ends("ful") || ends("ive") || ends("able") || ends("ible") ||
        ends("al") || ends("ic")) {
        return Pos::Adj;
    }
    return Pos::Noun;
}

std::vector<Pos> PosTagger::tag(const std::vector<std::string>& tokens) const {
    std::vector<Pos> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) {
        auto it = lexicon_.find(t);
        out.push_back(it != lexicon_.end() ? it->second : suffix_guess(t));
    }
    return out;
}

TokenSeq PosTagger::tag_seq(TokenSeq seq) const {
    seq.pos = tag(seq.tokens);
    return seq;
}

std::vector<Phrase> chunk_phrases(const TokenSeq& seq, const PosTagger& tagger,
                                  int sentence_index) {
    if (!seq.has_pos()) throw DataError("chunk_phrases requires POS tags");
    if (seq.pos.size() != seq.tokens.size()) throw DataError("POS layer length mismatch");
    int n = static_cast<int>(seq.size());
    std::vector<Phrase> out;
    std::vector<std::pair<int, int>> noun_phrases;  // [start, end)

    int i = 0;
    while (i < n) {
        if (seq.pos[static_cast<size_t>(i)] != Pos::Noun) {
            ++i;
            continue;
        }
        int end = i;
        while (end < n && seq.pos[static_cast<size_t>(end)] == Pos::Noun) ++end;
        int start = i;
        while (start > 0 && seq.pos[static_cast<size_t>(start - 1)] == Pos::Adj) --start;
        if (start > 0 && tagger.is_determiner(seq.tokens[static_cast<size_t>(start - 1)])) --start;
        noun_phrases.emplace_back(start, end);
        i = end;
    }
    for (const auto& [s, e] : noun_phrases) {
        out.push_back(Phrase{s, e, PhraseKind::NP, sentence_index});
    }
    for (int v = 0; v < n; ++v) {
        if (seq.pos[static_cast<size_t>(v)] != Pos::Verb) continue;
        for (const auto& [s, e] : noun_phrases) {
            if (s == v + 1) {
                out.push_back(Phrase{v, e, PhraseKind::VP, sentence_index});
                break;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Phrase& a, const Phrase& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.end != b.end) return a.end < b.end;
        return a.kind < b.kind;
    });
    return out;
}

}  // namespace argen
