#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <random>
#include <set>

#include "wsi/error.hpp"
#include "wsi/mt_labeler.hpp"

using namespace wsi;

namespace {

std::vector<TranslationRecord> records(const std::vector<std::vector<std::string>>& t) {
    std::vector<TranslationRecord> out;
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back({"c" + std::to_string(i + 1), t[i]});
    return out;
}

}  // namespace

TEST(Porter, ClassicExamples) {
    EXPECT_EQ(porter_stem("banks"), "bank");
    EXPECT_EQ(porter_stem("caresses"), "caress");
    EXPECT_EQ(porter_stem("jar"), "jar");
    EXPECT_EQ(porter_stem("ponies"), "poni");
    EXPECT_EQ(porter_stem("caress"), "caress");
    EXPECT_EQ(porter_stem("cats"), "cat");
    EXPECT_EQ(porter_stem("feed"), "feed");
    EXPECT_EQ(porter_stem("agreed"), "agre");
    EXPECT_EQ(porter_stem("plastered"), "plaster");
    EXPECT_EQ(porter_stem("motoring"), "motor");
    EXPECT_EQ(porter_stem("sing"), "sing");
    EXPECT_EQ(porter_stem("conflated"), "conflat");
    EXPECT_EQ(porter_stem("hopping"), "hop");
    EXPECT_EQ(porter_stem("falling"), "fall");
    EXPECT_EQ(porter_stem("filing"), "file");
    EXPECT_EQ(porter_stem("happy"), "happi");
    EXPECT_EQ(porter_stem("relational"), "relat");
    EXPECT_EQ(porter_stem("conditional"), "condit");
    EXPECT_EQ(porter_stem("generalization"), "gener");
    EXPECT_EQ(porter_stem("hopefulness"), "hope");
    EXPECT_EQ(porter_stem("electrical"), "electr");
    EXPECT_EQ(porter_stem("adjustment"), "adjust");
    EXPECT_EQ(porter_stem("controlling"), "control");
    EXPECT_EQ(porter_stem("rolling"), "roll");
}

TEST(Porter, ReferenceImplementationDepartures) {
    EXPECT_EQ(porter_stem("possibly"), "possibl");
    EXPECT_EQ(porter_stem("archaeology"), "archaeolog");
}

TEST(Porter, ShortAndNonAsciiWordsPassThrough) {
    EXPECT_EQ(porter_stem(""), "");
    EXPECT_EQ(porter_stem("is"), "is");
    EXPECT_EQ(porter_stem("as"), "as");
    EXPECT_EQ(porter_stem("банки"), "банки");
    EXPECT_EQ(porter_stem("naïvely"), "naïvely");
}

TEST(Porter, MatchesReferenceFixtureSample) {
    std::ifstream voc(std::string(WSI_TEST_DATA_DIR) + "/porter_voc.txt");
    std::ifstream out(std::string(WSI_TEST_DATA_DIR) + "/porter_output.txt");
    ASSERT_TRUE(voc && out);
    std::string w, s;
    std::size_t n = 0, agree = 0;
    while (std::getline(voc, w) && std::getline(out, s)) {
        ++n;
        agree += porter_stem(w) == s;
    }
    ASSERT_GT(n, 20000u);
    EXPECT_GE(static_cast<double>(agree) / static_cast<double>(n), 0.999);
}

TEST(Porter, NotIdempotentInGeneral) {
    // A second pass can strip further; labels are built from a single pass.
    EXPECT_EQ(porter_stem("agreed"), "agre");
    EXPECT_EQ(porter_stem("agre"), "agr");
}

TEST(Stemmer, StemsEachTokenOfAPhrase) {
    EXPECT_EQ(Stemmer{StemmerKind::porter}.apply("river banks"), "river bank");
    EXPECT_EQ(Stemmer{StemmerKind::porter}.apply("savings  banks"), "save  bank");
    EXPECT_EQ(Stemmer{StemmerKind::identity}.apply("river banks"), "river banks");
    EXPECT_EQ(parse_stemmer("porter"), StemmerKind::porter);
    EXPECT_THROW(parse_stemmer("snowball"), ConfigError);
}

TEST(MtLabeler, GroupsByMajorityTranslation) {
    const auto l = label_by_translation(records({{"jar"}, {"jar"}, {"bank"}}), Stemmer{});
    EXPECT_EQ(l.assignments.at("c1"), "jar");
    EXPECT_EQ(l.assignments.at("c2"), "jar");
    EXPECT_EQ(l.assignments.at("c3"), "bank");
}

TEST(MtLabeler, PorterMergesInflections) {
    const auto id = label_by_translation(records({{"banks"}, {"bank"}}), Stemmer{StemmerKind::identity});
    EXPECT_NE(id.assignments.at("c1"), id.assignments.at("c2"));
    const auto st = label_by_translation(records({{"banks"}, {"bank"}}), Stemmer{StemmerKind::porter});
    EXPECT_EQ(st.assignments.at("c1"), "bank");
    EXPECT_EQ(st.assignments.at("c2"), "bank");
}

TEST(MtLabeler, TieBreaksLexicographically) {
    EXPECT_EQ(label_by_translation(records({{"jar", "bank"}}), Stemmer{}).assignments.at("c1"), "bank");
    EXPECT_EQ(label_by_translation(records({{"jar", "Bank", "jar"}}), Stemmer{}).assignments.at("c1"), "jar");
    EXPECT_EQ(label_by_translation(records({{"Bank", "bank", "jar"}}), Stemmer{}).assignments.at("c1"), "bank");
}

TEST(MtLabeler, EmptyTranslationListIsAnError) {
    EXPECT_THROW(label_by_translation(records({{}}), Stemmer{}), DataError);
}

TEST(MtLabeler, IdentityPartitionIsEqualityAfterLowercasing) {
    std::mt19937_64 rng(3);
    const std::vector<std::string> pool{"Bank", "bank", "banks", "Jar", "jars", "shore", "Shores", "bench"};
    std::vector<std::vector<std::string>> t;
    for (int i = 0; i < 200; ++i) t.push_back({pool[rng() % pool.size()]});
    const auto recs = records(t);
    const auto id = label_by_translation(recs, Stemmer{StemmerKind::identity});
    const auto po = label_by_translation(recs, Stemmer{StemmerKind::porter});
    const auto lower = [](std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    std::map<std::string, std::set<std::string>> id_to_porter;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        for (std::size_t j = 0; j < recs.size(); ++j) {
            const bool same = id.assignments.at(recs[i].context_id) == id.assignments.at(recs[j].context_id);
            EXPECT_EQ(same, lower(t[i][0]) == lower(t[j][0]));
        }
        id_to_porter[id.assignments.at(recs[i].context_id)].insert(po.assignments.at(recs[i].context_id));
    }
    // porter only merges identity clusters, never splits them
    for (const auto& [k, v] : id_to_porter) EXPECT_EQ(v.size(), 1u) << k;
}

TEST(Translations, ParseSidecar) {
    const auto recs = parse_translations("c1\tbank, banks\nc2\tjar\r\n\nc3\t river bank \n");
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].translations, (std::vector<std::string>{"bank", "banks"}));
    EXPECT_EQ(recs[1].translations, (std::vector<std::string>{"jar"}));
    EXPECT_EQ(recs[2].translations, (std::vector<std::string>{"river bank"}));
    EXPECT_THROW(parse_translations("c1\t , \n"), DataError);
    EXPECT_THROW(parse_translations("c1 bank\n"), DataError);
    EXPECT_THROW(parse_translations("c1\ta\nc1\tb\n"), DataError);
}
