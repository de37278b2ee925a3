#!/usr/bin/env python3
# Regenerates data/fixtures/table1_cells.json from the printed reference grid.
import json
import pathlib
cols = [("german_credit","mlp"),("german_credit","tab_resnet"),("german_credit","transformer"),
        ("acs_income","mlp"),("acs_income","tab_resnet"),("acs_income","transformer"),
        ("diabetes_130","mlp"),("diabetes_130","tab_resnet"),("diabetes_130","transformer")]
rows = {
 "f1":[.7683,.7715,.7708,.8362,.8386,.8444,.8374,.8378,.8379],
 "rs":[.8352,.7461,.6402,.8420,.8676,.7126,.8796,.8716,.6222],
 "explainability":[.5412,.5024,.5562,.4620,.5730,.4799,.5594,.5589,.5666],
 "complexity":[.6697,.7469,.7476,.6752,.6694,.6759,.7403,.7523,.7492],
 "faithfulness":[.3684,.4011,.5247,.5501,.6219,.5710,.6701,.7428,.6372],
 "robustness_cat":[.2741,.3288,.1300,.0527,.1997,.1267,.0723,.1240,.0685],
 "randomization":[.8524,.5328,.8225,.5699,.8011,.5461,.7547,.6166,.8115],
 "fairness":[.9003,.8996,.9399,.9264,.9311,.9271,.9770,.9636,.9231],
 "accuracy_diff":[.9802,.8889,.9802,.8812,.8868,.8812,.9541,.9562,.9609],
 "precision_diff":[.9544,.8727,.9033,.9256,.9747,.9886,.9643,.9165,.7682],
 "tpr_diff":[1.0,.9637,.9319,.9536,.9320,.8903,.9899,.9822,.9647],
 "fpr_diff":[.6667,.8730,.9444,.9452,.9308,.9482,.9999,.9996,.9987],
 "demographic_parity_diff":[.8929,.9524,.9841,.8603,.8331,.8575,.9972,.9956,.9926],
 "equalized_odds_diff":[.6667,.8730,.9319,.9452,.9308,.8903,.9899,.9822,.9647],
 "sustainability":[.9855,.9689,.2480,.9899,.9766,.4575,.9833,.9677,.0071],
 "parameter_count":[.9513,.8973,.0199,.9708,.9455,.0000,.9513,.8973,.0286],
 "flops":[.9978,.9955,.0000,.9987,.9958,.4649,.9978,.9955,.0000],
 "macs":[.9972,.9943,.0000,.9983,.9946,.4342,.9972,.9943,.0000],
 "kg_co2e":[.9958,.9887,.9723,.9920,.9704,.9308,.9868,.9836,.0000],
 "robustness":[.9139,.6133,.8168,.9898,.9895,.9858,.9988,.9960,.9921],
 "fgsm_accuracy_gap":[.9500,.9600,.9900,.9943,.9983,.9989,1.0,1.0,1.0],
 "clever_u":[.9965,.8800,.9195,.9780,.9735,.9600,.9975,.9880,.9765],
 "loss_sensitivity":[.7951,.0000,.5410,.9972,.9968,.9986,.9989,.9990,.9999],
}
cells=[]
for i,(ds,m) in enumerate(cols):
    mets=[]
    for cat,key in [("complexity","complexity"),("faithfulness","faithfulness"),("robustness","robustness_cat"),("randomization","randomization")]:
        mets.append({"name":cat,"dimension":"explainability","category":cat,"normalized":rows[key][i]})
    for k in ["accuracy_diff","precision_diff","tpr_diff","fpr_diff","demographic_parity_diff","equalized_odds_diff"]:
        mets.append({"name":k,"dimension":"fairness","normalized":rows[k][i]})
    for k in ["parameter_count","flops","macs","kg_co2e"]:
        mets.append({"name":k,"dimension":"sustainability","normalized":rows[k][i]})
    for k in ["fgsm_accuracy_gap","clever_u","loss_sensitivity"]:
        mets.append({"name":k,"dimension":"robustness","normalized":rows[k][i]})
    cells.append({"dataset":ds,"model":m,"f1":rows["f1"][i],"metrics":mets,
      "expected":{"explainability":rows["explainability"][i],"fairness":rows["fairness"][i],
                  "sustainability":rows["sustainability"][i],"robustness":rows["robustness"][i],
                  "responsibility_score":rows["rs"][i]}})
json.dump({"source":"published reference grid, values as printed to 4 decimals",
           "tolerance":0.0005,"cells":cells}, open(pathlib.Path(__file__).resolve().parent.parent / "data/fixtures/table1_cells.json","w"), indent=1)
