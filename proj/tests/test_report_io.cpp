#include <gtest/gtest.h>

#include "normtori/report_io.hpp"

using namespace normtori;

TEST(ReportIo, DescriptorFormsAgree) {
    auto cycles = descriptor_from_json(json::parse(R"j({"degree": 5, "generators": ["(1,2,3,4,5)", "(2,3,5,4)"]})j"));
    auto images = descriptor_from_json(json::parse(R"j({"degree": 5, "generators": [[2,3,4,5,1], [1,3,5,2,4]]})j"));
    EXPECT_EQ(cycles, images);
    EXPECT_EQ(cycles.resolve().order(), 20u);
    EXPECT_EQ(descriptor_from_json(to_json(cycles)), cycles);

    auto label = descriptor_from_json(json::parse(R"j({"label": "10T3", "stabilizer_point": 4})j"));
    EXPECT_EQ(label.degree, 10u);
    EXPECT_EQ(label.stabilizer_point, 4u);
    EXPECT_EQ(descriptor_from_json(to_json(label)), label);
}

TEST(ReportIo, DescriptorErrors) {
    EXPECT_THROW(descriptor_from_json(json::parse(R"j({"label": "10T3", "degree": 9})j")), InvalidInput);
    EXPECT_THROW(descriptor_from_json(json::parse(R"j({"degree": 4, "generators": [[1,2,3]]})j")), InvalidInput);
    EXPECT_THROW(descriptor_from_json(json::parse(R"j({"degree": 4})j")), InvalidInput);
    EXPECT_THROW(descriptor_from_json(json::parse(R"j({"label": "99T99"})j")), InvalidInput);
    auto intransitive = descriptor_from_json(json::parse(R"j({"degree": 4, "generators": ["(1,2)"]})j"));
    EXPECT_THROW((void)intransitive.resolve(), InvalidInput);
    auto far = descriptor_from_json(json::parse(R"j({"degree": 3, "generators": ["(1,2,3)"], "stabilizer_point": 4})j"));
    EXPECT_THROW((void)far.resolve(), InvalidInput);
}

TEST(ReportIo, LargeIntegersAsStrings) {
    IntMatrix m(1, 2);
    m(0, 0) = Integer("123456789012345678901234567890");
    m(0, 1) = -7;
    json j = to_json(m);
    EXPECT_TRUE(j["entries"][0][0].is_string());
    EXPECT_TRUE(j["entries"][0][1].is_number_integer());
    EXPECT_EQ(matrix_from_json(j), m);
}

TEST(ReportIo, ClassifyDocumentRoundTrip) {
    ReportDocument doc;
    doc.command = "classify";
    doc.input = descriptor_from_label("10T3");
    doc.seed = 0;
    doc.report = classify(catalog::lookup("10T3"), ClassifyConfig{}, "10T3");
    doc.seconds = 1.25;
    ASSERT_TRUE(doc.report->stably.certificate);

    std::string text = to_json(doc).dump();
    ReportDocument back = document_from_json(json::parse(text));
    EXPECT_EQ(back, doc);
    EXPECT_EQ(to_json(back).dump(), text);

    auto checks = verify_document(back);
    ASSERT_EQ(checks.size(), 1u);
    EXPECT_TRUE(checks[0].second);

    // a tampered certificate fails after reload
    json tampered = json::parse(text);
    auto& entries = tampered["stably"]["certificate"]["matrix"]["entries"];
    entries[0][0] = entries[0][0].get<std::int64_t>() + 1;
    EXPECT_FALSE(verify_document(document_from_json(tampered))[0].second);
}

TEST(ReportIo, SameSeedSameBytes) {
    auto run = [] {
        ReportDocument doc;
        doc.command = "classify";
        doc.input = descriptor_from_label("6T3");
        doc.seed = 7;
        ClassifyConfig cfg;
        cfg.seed = 7;
        doc.report = classify(catalog::lookup("6T3"), cfg, "6T3");
        return to_json(doc).dump();
    };
    EXPECT_EQ(run(), run());
}

TEST(ReportIo, VerdictWording) {
    ClassificationReport r;
    r.stably.value = Truth::yes;
    r.retract.value = Truth::yes;
    EXPECT_EQ(verdict_phrase(r), "stably k-rational");
    r.stably.value = Truth::no;
    EXPECT_EQ(verdict_phrase(r), "not stably but retract k-rational");
    r.retract.value = Truth::no;
    EXPECT_EQ(verdict_phrase(r), "not retract k-rational");
    EXPECT_TRUE(fully_decided(r));
    r.retract.value = Truth::yes;
    r.stably.value = Truth::unknown;
    EXPECT_FALSE(fully_decided(r));
}
