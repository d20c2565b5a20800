"""Frozen reference values for the extreme-pair system.

Each row of EXTREME_PAIR_ROWS is (decimal exponent, z_low, z_high) for
the system  N*exp(z_low) + exp(z_high) = e**2,
            N*z_low*exp(z_low) + z_high*exp(z_high) = e**2
with N = 10**exponent, solved independently with 50-digit precision
arithmetic (damped Newton from the drift ansatz; residuals < 1e-40).
The strings carry 31 significant digits.
"""

EXTREME_PAIR_ROWS = (
    (1, "-1.8599539391797653780996686364493", "1.7634042477581860636342812520981"),
    (2, "-4.6278529940301947157458180305676", "1.8580906928560505140960875180438"),
    (3, "-7.2278923365046354303919671475052", "1.8965708210067454817129699066334"),
    (4, "-9.7529279223041958189401940128674", "1.9180710389285259082138396366755"),
    (5, "-12.23426184122178540565187685582", "1.9319494203818796717151866525306"),
    (6, "-14.686689485112383196253350885528", "1.941701042038176132682488585943"),
    (7, "-17.118475509130338419321449219176", "1.9489507180131363431129601417792"),
    (8, "-19.534737736752111249670741176574", "1.9545628133690736391913141129777"),
    (9, "-21.938877884281897893422087428599", "1.9590417833080193886068703580662"),
    (10, "-24.333277592346602338263750350022", "1.9627027620469153955488959845337"),
    (11, "-26.719672172461371813735932628894", "1.9657531814729595378854181456218"),
    (12, "-29.099366670257435261982274861811", "1.9683353707111573738492465130807"),
    (13, "-31.473368167571030624456199153849", "1.970550350496947761285545176838"),
    (14, "-33.842470627269595326611535858951", "1.9724718685216929582206115029034"),
    (15, "-36.20731141238751139407393422892", "1.9741550583546827046855344007126"),
    (16, "-38.568410155198951836337896822881", "1.97564198636943790477268372057"),
    (17, "-40.926196222869058989174011616314", "1.9769653208730088904749619599928"),
    (18, "-43.28102858421294787781225809291", "1.9781508271703613365389080750692"),
    (19, "-45.633210475623427729647938869856", "1.9792191056459012534062976747755"),
    (20, "-47.983000423353389741328990557576", "1.9801868284846851379610473178804"),
    (21, "-50.330620660008332271820694306839", "1.9810676363715292020369862557429"),
    (22, "-52.676263643082855194671803053742", "1.9818727996772032079642260800619"),
    (23, "-55.020097168291592849066888176454", "1.9826117134133018944596936081392"),
    (24, "-57.362268427077060922578379063246", "1.9832922728467949817312209115653"),
    (25, "-59.702907260160132201351723856461", "1.9839211621102961084222105523408"),
    (26, "-62.042128791447074538616865826092", "1.9845040784885601043186175801529"),
    (27, "-64.380035579030470553978577616248", "1.9850459085371711281404342988732"),
    (28, "-66.716719386002755126963619613768", "1.9855508677057357884921072471682"),
    (29, "-69.052262649137714881922574449762", "1.9860226120088820356292880321385"),
    (30, "-71.386739705385277326962820249044", "1.9864643280735340181774784668139"),
    (31, "-73.7202178226698188293210417966", "1.9868788063025456510398996161088"),
    (32, "-76.052758071376257724956806229201", "1.9872685007417625212636588061233"),
    (33, "-78.384416065240707497606345034329", "1.9876355783911370649894789906831"),
    (34, "-80.715242594490126828808238297291", "1.9879819600725889180558042388717"),
    (35, "-83.045284169538297201269228695051", "1.9883093544968926933418986392956"),
    (36, "-85.374583490011093204926910773042", "1.9886192868162322855194994642595"),
    (37, "-87.703179851099500408441885242821", "1.9889131226778662869710690898493"),
    (38, "-90.031109497045012553979249690171", "1.9891920885858755212588911444123"),
    (39, "-92.358405929815521230622254914238", "1.9894572892164831961499157326311"),
    (40, "-94.685100179630439886817678169988", "1.9897097222064583485549741614556"),
)

# Upper-branch solution of z * exp(z) = e**2, 25 significant digits.
UPPER_BRANCH_ROOT = "1.557145598997611416858672"
