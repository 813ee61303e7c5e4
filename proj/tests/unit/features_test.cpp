#include <gtest/gtest.h>

#include <set>

#include "lexitransfer/error.hpp"
#include "lexitransfer/features.hpp"
#include "lexitransfer/language.hpp"

using namespace lexitransfer;

TEST(Language, InventoriesHaveElevenAndTwelvePanels) {
  EXPECT_EQ(pos_inventory(Language::LT).size(), 11u);
  EXPECT_EQ(pos_inventory(Language::EN).size(), 12u);
  EXPECT_FALSE(pos_valid_for(Language::LT, PosName::Auxiliary));
  EXPECT_TRUE(pos_valid_for(Language::EN, PosName::Auxiliary));
  for (Language lang : kLanguages)
    for (PosName p : pos_inventory(lang))
      EXPECT_EQ(parse_pos_name(pos_name(p)), p);
}

TEST(Language, CodesRoundTrip) {
  EXPECT_EQ(language_code(Language::LT), "lt");
  EXPECT_EQ(parse_language("en"), Language::EN);
  EXPECT_FALSE(parse_language("de"));
  EXPECT_EQ(direction_code({Language::EN, Language::LT}), "en-lt");
}

TEST(Features, CanonicalTextForm) {
  FeatureBundle b;
  b.number = Number::Sg;
  b.case_ = Case::Genitive;
  EXPECT_EQ(to_string(b), "case=genitive,number=sg");
  EXPECT_EQ(to_string(FeatureBundle{}), "");
  EXPECT_EQ(parse_bundle("number:sg,case:genitive"), b);
  EXPECT_EQ(parse_bundle(""), FeatureBundle{});
}

TEST(Features, ParseRejectsUnknown) {
  EXPECT_THROW(parse_bundle("case=ablative"), Error);
  EXPECT_THROW(parse_bundle("gender=masculine"), Error);
  EXPECT_THROW(parse_bundle("case"), Error);
}

TEST(Features, AbsentFeatureSortsFirst) {
  FeatureBundle inf;
  inf.mood = Mood::Infinitive;
  FeatureBundle finite;
  finite.number = Number::Sg;
  EXPECT_LT(inf, finite);
}

TEST(Features, LicensedCounts) {
  auto n = [](Language l, PosName p) { return licensed_bundles({l, p}).size(); };
  EXPECT_EQ(n(Language::LT, PosName::Noun), 14u);
  EXPECT_EQ(n(Language::LT, PosName::Pronoun), 14u);
  EXPECT_EQ(n(Language::LT, PosName::Adjective), 42u);
  EXPECT_EQ(n(Language::LT, PosName::Verb), 19u);
  EXPECT_EQ(n(Language::EN, PosName::Noun), 2u);
  EXPECT_EQ(n(Language::EN, PosName::Adjective), 3u);
  EXPECT_EQ(n(Language::EN, PosName::Verb), 13u);
  EXPECT_EQ(n(Language::LT, PosName::Interjection), 1u);
  EXPECT_EQ(n(Language::EN, PosName::Adverb), 1u);
}

TEST(Features, LicensedBundlesSortedUniqueAndRoundTrip) {
  for (Language lang : kLanguages)
    for (PosName p : pos_inventory(lang)) {
      const auto& all = licensed_bundles({lang, p});
      std::set<FeatureBundle> uniq(all.begin(), all.end());
      EXPECT_EQ(uniq.size(), all.size());
      EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
      for (const auto& b : all) {
        EXPECT_EQ(parse_bundle(to_string(b)), b);
        EXPECT_TRUE(is_licensed({lang, p}, b));
      }
    }
  FeatureBundle b;
  b.case_ = Case::Genitive;
  EXPECT_FALSE(is_licensed({Language::EN, PosName::Noun}, b));
}

TEST(Features, SetAndGetByName) {
  FeatureBundle b;
  EXPECT_TRUE(set_feature(b, "tense", "future"));
  EXPECT_FALSE(set_feature(b, "tense", "pluperfect"));
  EXPECT_EQ(get_feature(b, "tense"), "future");
  EXPECT_FALSE(get_feature(b, "case"));
  EXPECT_EQ(feature_names().size(), 6u);
  EXPECT_EQ(feature_values("case").size(), 7u);
}

TEST(Errors, NamesAndStatusesAreStable) {
  EXPECT_EQ(error_code_name(ErrorCode::DuplicateLexeme), "duplicate_lexeme");
  EXPECT_EQ(error_code_name(ErrorCode::NotFound), "not_found");
  EXPECT_EQ(error_http_status(ErrorCode::NotFound), 404);
  EXPECT_EQ(error_http_status(ErrorCode::DuplicateLexeme), 409);
  EXPECT_EQ(error_http_status(ErrorCode::BudgetExhausted), 429);
  EXPECT_EQ(error_http_status(ErrorCode::MissingActor), 400);
}
