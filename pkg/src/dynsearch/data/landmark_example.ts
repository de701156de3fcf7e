ts-format 1
label x 1
label y 2
state A
state B
state C
state D
init A
goal D
trans A x B
trans A y C
trans B y C
trans C x D
