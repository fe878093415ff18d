#include "gpca/rules.hpp"

#include <stdexcept>

namespace gpca {

char to_char(Symbol s) {
    switch (s) {
        case Symbol::Zero: return '0';
        case Symbol::Question: return '?';
        case Symbol::One: return '1';
    }
    return '#';
}

Symbol symbol_from_char(char c) {
    switch (c) {
        case '0': return Symbol::Zero;
        case '?': return Symbol::Question;
        case '1': return Symbol::One;
        default: throw std::invalid_argument(std::string("bad symbol '") + c + "' (expected 0, ? or 1)");
    }
}

char to_char(SiteMark m) {
    switch (m) {
        case SiteMark::Trap: return 'T';
        case SiteMark::Target: return 'G';
        case SiteMark::Open: return '.';
    }
    return '#';
}

PairClass classify_pair(Symbol a, Symbol b) {
    if (a == Symbol::One || b == Symbol::One) return PairClass::OneStar;
    if (a == Symbol::Zero && b == Symbol::Zero) return PairClass::Zeros;
    return PairClass::StarStar;
}

Params::Params(Rational p, Rational q) : p_(std::move(p)), q_(std::move(q)) {
    if (p_ < 0 || q_ < 0) throw std::invalid_argument("p and q must be nonnegative");
    if (p_ + q_ <= 0 || p_ + q_ > 1)
        throw std::invalid_argument("need 0 < p+q <= 1, got p=" + p_.str() + " q=" + q_.str());
    r_ = 1 - p_ - q_;
}

std::string to_string(const Params& params) {
    return "p=" + params.p().str() + " q=" + params.q().str();
}

SymbolDistribution class_rule_distribution(PairClass c, const Params& params) {
    SymbolDistribution d;
    switch (c) {
        case PairClass::Zeros:
            d[Symbol::Zero] = params.p();
            d[Symbol::One] = 1 - params.p();
            break;
        case PairClass::StarStar:
            d[Symbol::Zero] = params.p();
            d[Symbol::One] = params.q();
            d[Symbol::Question] = params.r();
            break;
        case PairClass::OneStar:
            d[Symbol::Zero] = 1 - params.q();
            d[Symbol::One] = params.q();
            break;
    }
    return d;
}

SymbolDistribution local_rule_distribution(Symbol a, Symbol b, const Params& params, RuleSet rules) {
    if (rules == RuleSet::Base && (a == Symbol::Question || b == Symbol::Question))
        throw std::invalid_argument("base rule is defined on {0,1} only");
    return class_rule_distribution(classify_pair(a, b), params);
}

Symbol deterministic_site_update(Symbol a, Symbol b, SiteMark mark) {
    if (mark == SiteMark::Trap) return Symbol::Zero;
    if (mark == SiteMark::Target) return Symbol::One;
    switch (classify_pair(a, b)) {
        case PairClass::Zeros: return Symbol::One;
        case PairClass::OneStar: return Symbol::Zero;
        case PairClass::StarStar: return Symbol::Question;
    }
    return Symbol::Question;
}

RingConfig::RingConfig(std::vector<Symbol> cells) : cells_(std::move(cells)) {
    if (cells_.empty() || cells_.size() % 2 != 0)
        throw std::invalid_argument("ring length must be even and positive, got " +
                                    std::to_string(cells_.size()));
}

RingConfig::RingConfig(std::size_t length, Symbol fill) : RingConfig(std::vector<Symbol>(length, fill)) {}

RingConfig RingConfig::parse(std::string_view text) {
    std::vector<Symbol> cells;
    for (char c : text) cells.push_back(symbol_from_char(c));
    return RingConfig(std::move(cells));
}

std::size_t RingConfig::count(Symbol s) const {
    std::size_t n = 0;
    for (auto c : cells_) n += c == s;
    return n;
}

std::string RingConfig::str() const {
    std::string s;
    for (auto c : cells_) s += to_char(c);
    return s;
}

RingConfig deterministic_row_update(const RingConfig& config, std::span<const SiteMark> marks) {
    const std::size_t L = config.size();
    if (marks.size() != L)
        throw std::invalid_argument("mark row has length " + std::to_string(marks.size()) +
                                    ", ring has " + std::to_string(L));
    std::vector<Symbol> out(L);
    for (std::size_t n = 0; n < L; ++n) {
        std::size_t e = source_cell(n);
        out[n] = deterministic_site_update(config[e], config[e + 1], marks[n]);
    }
    return RingConfig(std::move(out));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

unsigned __int128 threshold(const Rational& x) {
    // floor(x * 2^64) for 0 <= x <= 1
    Integer scaled = boost::multiprecision::numerator(x) * (Integer(1) << 64) /
                     boost::multiprecision::denominator(x);
    unsigned __int128 hi = static_cast<unsigned __int128>((scaled >> 64).convert_to<std::uint64_t>());
    unsigned __int128 lo = static_cast<unsigned __int128>(
        (scaled & ((Integer(1) << 64) - 1)).convert_to<std::uint64_t>());
    return (hi << 64) | lo;
}

}  // namespace

std::uint64_t KeyedStream::bits(std::uint64_t t, std::uint64_t site) const {
    std::uint64_t h = splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(tag_)));
    h = splitmix64(h ^ t);
    return splitmix64(h ^ (site * 0xd1b54a32d192ed03ULL));
}

double KeyedStream::uniform(std::uint64_t t, std::uint64_t site) const {
    return static_cast<double>(bits(t, site) >> 11) * 0x1.0p-53;
}

MarkSampler::MarkSampler(const Params& params)
    : trap_(threshold(params.p())), target_(threshold(params.p() + params.q())) {}

std::vector<SiteMark> sample_mark_row(const MarkSampler& sampler, const KeyedStream& stream,
                                      std::uint64_t t, std::size_t length) {
    std::vector<SiteMark> row(length);
    for (std::size_t n = 0; n < length; ++n) row[n] = sampler(stream.bits(t, n));
    return row;
}

RingConfig stochastic_step(const RingConfig& config, const Params& params, const KeyedStream& stream,
                           std::uint64_t t) {
    auto marks = sample_mark_row(MarkSampler(params), stream, t, config.size());
    return deterministic_row_update(config, marks);
}

}  // namespace gpca
