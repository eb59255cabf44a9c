#include "increparse/features.hpp"

#include <algorithm>

namespace increparse {

namespace {

constexpr std::string_view kBos = "<s>";
constexpr std::string_view kEos = "</s>";
constexpr std::string_view kRoot = "<root>";
constexpr std::string_view kNoTag = "<none>";

constexpr FeatureId kFnvOffset = 1469598103934665603ull;
constexpr FeatureId kFnvPrime = 1099511628211ull;

inline FeatureId fnv_step(FeatureId h, unsigned char byte) { return (h ^ byte) * kFnvPrime; }

inline FeatureId fnv(FeatureId h, std::string_view s) {
    for (char c : s) h = fnv_step(h, static_cast<unsigned char>(c));
    return fnv_step(h, 0xff);  // separator
}

inline FeatureId fnv(FeatureId h, int v) {
    return fnv(h, std::to_string(v));
}

// Feature builder: every feature is hash(template-id, parts...).
class Builder {
public:
    explicit Builder(FeatureVector& out) : out_(out) {}

    template <typename... Parts>
    void add(int template_id, const Parts&... parts) {
        FeatureId h = fnv(kFnvOffset, template_id);
        ((h = fnv(h, parts)), ...);
        out_.ids.push_back(h);
    }

    void finish() {
        std::sort(out_.ids.begin(), out_.ids.end());
        out_.ids.erase(std::unique(out_.ids.begin(), out_.ids.end()), out_.ids.end());
    }

private:
    FeatureVector& out_;
};

std::string_view suffix(std::string_view s, std::size_t len) {
    return s.size() <= len ? s : s.substr(s.size() - len);
}

std::string_view prefix(std::string_view s, std::size_t len) {
    return s.size() <= len ? s : s.substr(0, len);
}

bool has_digit(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return c >= '0' && c <= '9'; });
}

bool starts_upper(std::string_view s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

}  // namespace

SentenceView::SentenceView(std::vector<std::string> forms)
    : n_(static_cast<int>(forms.size())), forms_(std::move(forms)) {
    upos_.resize(forms_.size());
    upos_set_.assign(forms_.size(), false);
}

SentenceView::SentenceView(std::vector<std::string> forms, std::vector<std::string> upos)
    : n_(static_cast<int>(forms.size())), forms_(std::move(forms)), upos_(std::move(upos)) {
    if (upos_.size() != forms_.size()) throw DataError("forms/upos length mismatch");
    upos_set_.assign(forms_.size(), true);
}

void SentenceView::touch(int i) const {
    if (i < 1) return;
    const int effective = std::min(i, n_);
    if (limit_ && effective > *limit_)
        throw ContractViolation("token " + std::to_string(effective) +
                                " accessed beyond the declared horizon " +
                                std::to_string(*limit_));
    high_water_ = std::max(high_water_, effective);
}

std::string_view SentenceView::form(int i) const {
    if (i < 1) return kBos;
    if (i > n_) {
        touch(i);
        return kEos;
    }
    touch(i);
    return forms_[static_cast<std::size_t>(i) - 1];
}

std::string_view SentenceView::upos(int i) const {
    if (i < 1) return kBos;
    if (i > n_) {
        touch(i);
        return kEos;
    }
    touch(i);
    if (!upos_set_[static_cast<std::size_t>(i) - 1]) return kNoTag;
    return upos_[static_cast<std::size_t>(i) - 1];
}

bool SentenceView::has_upos(int i) const {
    return i >= 1 && i <= n_ && upos_set_[static_cast<std::size_t>(i) - 1];
}

void SentenceView::set_upos(int i, std::string tag) {
    upos_[static_cast<std::size_t>(i) - 1] = std::move(tag);
    upos_set_[static_cast<std::size_t>(i) - 1] = true;
}

FeatureVector extract_features_sl(const SentenceView& s, int i, int k) {
    FeatureVector fv;
    Builder b(fv);
    b.add(0);  // bias
    // Unigrams over the window [i-3, i+k].
    for (int d = -3; d <= k; ++d) {
        b.add(1, d, s.form(i + d));
        b.add(2, d, s.upos(i + d));
    }
    b.add(3, s.form(i), s.upos(i));
    b.add(4, s.upos(i - 1), s.upos(i));
    b.add(5, s.upos(i - 2), s.upos(i - 1), s.upos(i));
    b.add(6, s.upos(i - 1), s.form(i));
    if (k >= 1) {
        b.add(7, s.upos(i), s.upos(i + 1));
        b.add(8, s.form(i), s.form(i + 1));
        b.add(9, s.upos(i - 1), s.upos(i), s.upos(i + 1));
    }
    if (k >= 2) {
        b.add(10, s.upos(i), s.upos(i + 1), s.upos(i + 2));
        b.add(11, s.upos(i + 1), s.upos(i + 2));
    }
    // Shape of the focus token.
    std::string_view w = s.form(i);
    b.add(12, suffix(w, 3));
    b.add(13, suffix(w, 2));
    b.add(14, prefix(w, 1));
    b.add(15, has_digit(w) ? 1 : 0);
    b.add(16, starts_upper(w) ? 1 : 0);
    // Coarse position information.
    b.add(17, std::min(i, 6));
    b.add(18, i == 1 ? 1 : 0);
    b.finish();
    return fv;
}

FeatureVector extract_features_tb(const SentenceView& s, const Configuration& c, int k) {
    FeatureVector fv;
    Builder b(fv);
    const int top = c.stack_top();
    const int front = c.buffer_front;
    std::string_view top_form = top == 0 ? kRoot : s.form(top);
    std::string_view top_upos = top == 0 ? kRoot : s.upos(top);

    b.add(20);  // bias
    b.add(21, top_form);
    b.add(22, top_upos);
    for (int d = 0; d <= k; ++d) {
        b.add(23, d, s.form(front + d));
        b.add(24, d, s.upos(front + d));
    }
    b.add(25, top_upos, s.upos(front));
    b.add(26, top_form, s.upos(front));
    b.add(27, top_upos, s.form(front));
    b.add(28, top_form, s.form(front));
    if (k >= 1) b.add(29, top_upos, s.upos(front), s.upos(front + 1));
    if (k >= 2) b.add(30, s.upos(front), s.upos(front + 1), s.upos(front + 2));

    // Arc-derived state: whether/how the stack top is attached and how many
    // dependents it gathered so far.
    const bool top_headed = top != 0 && c.head_of(top) != -1;
    b.add(31, top_headed ? 1 : 0);
    if (top_headed) b.add(32, c.deprel_of(top));
    int dep_count = 0;
    for (const Dependency& a : c.arcs)
        if (a.head == top) ++dep_count;
    b.add(33, std::min(dep_count, 3));
    b.add(34, top == 0 ? 0 : std::min(front - top, 5));
    b.add(35, top == 0 ? 1 : 0);
    b.add(36, front > c.n ? 1 : 0);
    b.finish();
    return fv;
}

FeatureVector extract_features_pos(const SentenceView& s, int i, int k,
                                   std::string_view prev_tag, std::string_view prev2_tag) {
    FeatureVector fv;
    Builder b(fv);
    b.add(40);  // bias
    std::string_view w = s.form(i);
    b.add(41, w);
    b.add(42, suffix(w, 3));
    b.add(43, suffix(w, 2));
    b.add(44, suffix(w, 1));
    b.add(45, prefix(w, 1));
    b.add(46, has_digit(w) ? 1 : 0);
    b.add(47, starts_upper(w) ? 1 : 0);
    b.add(48, prev_tag);
    b.add(49, prev2_tag);
    b.add(50, prev_tag, prev2_tag);
    b.add(51, prev_tag, w);
    b.add(52, s.form(i - 1));
    b.add(53, suffix(s.form(i - 1), 3));
    b.add(54, s.form(i - 2));
    for (int d = 1; d <= k; ++d) {
        b.add(55, d, s.form(i + d));
        b.add(56, d, suffix(s.form(i + d), 3));
    }
    b.add(57, i == 1 ? 1 : 0);
    b.finish();
    return fv;
}

}  // namespace increparse
