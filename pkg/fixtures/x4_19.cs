# irretractable; the diagonal x*x is i -> i+1 mod 4
4
1 0 2 3
3 2 0 1
0 1 3 2
2 3 1 0
